from .artifacts import (
    format_float,
    config_hash,
    artifact_meta,
    write_csv,
    read_csv,
    write_json,
    read_json,
)
