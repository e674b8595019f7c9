from dataclasses import fields

import numpy as np


def _fmt(v):
    if v is None:
        return "none"
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.6g}"
    if isinstance(v, complex):
        return f"{v.real:.6g}{v.imag:+.6g}j"
    return str(v)


class KeyValueReport:
    """Mixin for dataclass reports: one ``key=value`` line per field.

    Fields whose name starts with an underscore or whose value is an array are
    left out of the text form.
    """

    def items(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name.startswith("_") or isinstance(v, np.ndarray):
                continue
            yield f.name, v

    def to_text(self) -> str:
        return "\n".join(f"{k}={_fmt(v)}" for k, v in self.items())
