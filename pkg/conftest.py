# keep collection out of the reference corpus; it ships third-party test
# files with their own dependencies
collect_ignore = ["examples"]
