"""Validation helpers for JSON payloads; errors carry a JSON pointer."""

from ._exact import to_fraction


class SchemaError(ValueError):
    def __init__(self, path, message):
        super().__init__(f"{path or '/'}: {message}")
        self.path = path or "/"
        self.message = message


def child(path, key):
    token = str(key).replace("~", "~0").replace("/", "~1")
    return f"{path}/{token}"


def expect_dict(value, path):
    if not isinstance(value, dict):
        raise SchemaError(path, "expected an object")
    return value


def expect_list(value, path, length=None):
    if not isinstance(value, list):
        raise SchemaError(path, "expected an array")
    if length is not None and len(value) != length:
        raise SchemaError(path, f"expected {length} entries, got {len(value)}")
    return value


def require(obj, key, path):
    if key not in obj:
        raise SchemaError(child(path, key), "missing required field")
    return obj[key]


def expect_rational(value, path):
    try:
        return to_fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(path, f"not an exact rational ({exc})") from None


def expect_int(value, path):
    if isinstance(value, bool) or not isinstance(value, int):
        if isinstance(value, str):
            try:
                return int(value)
            except ValueError:
                pass
        raise SchemaError(path, "expected an integer")
    return value
