from .file_storage import REPORT_FILE, SUMMARY_FILE, FileStorage

__all__ = [
    "FileStorage",
    "REPORT_FILE",
    "SUMMARY_FILE",
]
