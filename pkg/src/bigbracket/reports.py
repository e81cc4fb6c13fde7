"""Uniform pass/fail reporting: every verification op emits a list of checks.

A check's verdict is True iff its residual is exactly zero; reports never
carry tolerances.  The residual is kept as a string rendering so reports
serialize deterministically (canonical monomial order everywhere).
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Check:
    name: str
    residual: str
    ok: bool
    witness: str = ""

    def to_dict(self) -> dict:
        d = {"name": self.name, "ok": self.ok, "residual": self.residual}
        if self.witness:
            d["witness"] = self.witness
        return d


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def add(self, name: str, residual_repr: str, ok: bool, witness: str = ""):
        self.checks.append(Check(name, residual_repr, ok, witness))

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failing(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def to_dict(self) -> dict:
        out = {
            "title": self.title,
            "ok": self.ok,
            "checks": [c.to_dict() for c in self.checks],
        }
        if self.notes:
            out["notes"] = list(self.notes)
        return out

    def to_text(self) -> str:
        lines = [f"== {self.title} =="]
        for c in self.checks:
            status = "ok" if c.ok else "FAIL"
            line = f"  [{status}] {c.name}: {c.residual}"
            if c.witness:
                line += f"   ({c.witness})"
            lines.append(line)
        for note in self.notes:
            lines.append(f"  note: {note}")
        lines.append(f"  => {'PASS' if self.ok else 'FAIL'}")
        return "\n".join(lines)
