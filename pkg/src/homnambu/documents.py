"""JSON algebra documents.

Every scalar is a string in the scalar grammar.  Maps are square matrices
given row by row: entry ``[r][c]`` is the coordinate on basis vector ``r`` of
the image of basis vector ``c``.  ``constraints`` are expressions asserted to
vanish; each is solved for the first parameter in its text that occurs
linearly, and that parameter is substituted away everywhere.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

from .algebras import BinaryAlgebra
from .errors import DocumentError, HomNambuError, UnknownName
from .linalg import Covector, Matrix
from .scalars import Scalar, identifiers_in, parse_scalar, solve_for
from .ternary import TernaryAlgebra

BUILTIN_MAPS = ("identity", "zero")
BUILTIN_FUNCTIONALS = ("zero",)


@dataclass
class AlgebraDocument:
    kind: str
    dim: int
    basis_names: list
    params: list = field(default_factory=list)
    brackets: list = field(default_factory=list)  # [{"args": [...], "value": [{"basis_name", "scalar"}]}]
    maps: dict = field(default_factory=dict)
    functionals: dict = field(default_factory=dict)
    constraints: list = field(default_factory=list)
    twist: list | None = None
    provenance: str | None = None
    expected_induced: list | None = None
    eliminated: dict = field(default_factory=dict)  # filled by apply_constraints, never written

    # -- reading ----------------------------------------------------------
    @classmethod
    def from_dict(cls, raw: Mapping) -> "AlgebraDocument":
        if not isinstance(raw, Mapping):
            raise DocumentError("document must be a JSON object")
        known = {
            "kind", "dim", "basis_names", "params", "brackets", "maps", "functionals",
            "constraints", "twist", "provenance", "expected_induced",
        }
        extra = set(raw) - known
        if extra:
            raise DocumentError(f"unknown field(s) {sorted(extra)}")
        for key in ("kind", "dim", "basis_names"):
            if key not in raw:
                raise DocumentError("missing field", key)
        doc = cls(
            kind=raw["kind"],
            dim=raw["dim"],
            basis_names=list(raw["basis_names"]),
            params=list(raw.get("params", [])),
            brackets=copy.deepcopy(list(raw.get("brackets", []))),
            maps=copy.deepcopy(dict(raw.get("maps", {}))),
            functionals=copy.deepcopy(dict(raw.get("functionals", {}))),
            constraints=list(raw.get("constraints", [])),
            twist=list(raw["twist"]) if raw.get("twist") is not None else None,
            provenance=raw.get("provenance"),
            expected_induced=copy.deepcopy(raw.get("expected_induced")),
        )
        doc.validate()
        return doc

    @classmethod
    def loads(cls, text: str) -> "AlgebraDocument":
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"invalid JSON: {exc.msg} at line {exc.lineno}") from exc
        return cls.from_dict(raw)

    @classmethod
    def load(cls, path: str | Path) -> "AlgebraDocument":
        return cls.loads(Path(path).read_text(encoding="utf-8"))

    # -- validation ---------------------------------------------------------
    def scalar(self, text, location: str) -> Scalar:
        if not isinstance(text, str):
            raise DocumentError("scalars must be strings in the scalar grammar", location)
        try:
            return parse_scalar(text, self.params)
        except HomNambuError as exc:
            raise DocumentError(str(exc), location) from exc

    def validate(self) -> None:
        if self.kind not in ("binary", "ternary"):
            raise DocumentError("kind must be 'binary' or 'ternary'", "kind")
        if not isinstance(self.dim, int) or self.dim < 1:
            raise DocumentError("dim must be a positive integer", "dim")
        if len(self.basis_names) != self.dim or len(set(self.basis_names)) != self.dim:
            raise DocumentError("basis_names must list dim distinct names", "basis_names")
        if len(set(self.params)) != len(self.params):
            raise DocumentError("duplicate parameter", "params")
        clash = set(self.params) & set(self.basis_names)
        if clash:
            raise DocumentError(f"names used both as parameter and basis: {sorted(clash)}", "params")
        arity = 2 if self.kind == "binary" else 3
        seen = set()
        for n, rec in enumerate(self.brackets):
            loc = f"brackets[{n}]"
            if not isinstance(rec, Mapping) or set(rec) != {"args", "value"}:
                raise DocumentError("bracket records need exactly 'args' and 'value'", loc)
            idx = self._indices(rec["args"], f"{loc}.args")
            if len(idx) != arity:
                raise DocumentError(f"expected {arity} arguments", f"{loc}.args")
            if any(a >= b for a, b in zip(idx, idx[1:])):
                raise DocumentError("arguments must be strictly increasing in basis order", f"{loc}.args")
            if tuple(idx) in seen:
                raise DocumentError("duplicate bracket", f"{loc}.args")
            seen.add(tuple(idx))
            self._vector(rec["value"], f"{loc}.value")
        for name, rows in self.maps.items():
            self._matrix(rows, f"maps.{name}")
        for name, vals in self.functionals.items():
            loc = f"functionals.{name}"
            if not isinstance(vals, list) or len(vals) != self.dim:
                raise DocumentError("functional needs dim entries", loc)
            for k, v in enumerate(vals):
                self.scalar(v, f"{loc}[{k}]")
        for k, c in enumerate(self.constraints):
            self.scalar(c, f"constraints[{k}]")
        if self.kind == "ternary":
            if self.twist is None or len(self.twist) != 2:
                raise DocumentError("ternary documents need a twist pair of map names", "twist")
            for name in self.twist:
                if name not in self.maps and name not in BUILTIN_MAPS:
                    raise DocumentError(f"unknown map {name!r}", "twist")
        elif self.twist is not None:
            raise DocumentError("binary documents carry no twist", "twist")
        if self.expected_induced is not None:
            for n, rec in enumerate(self.expected_induced):
                loc = f"expected_induced[{n}]"
                idx = self._indices(rec.get("args", []), f"{loc}.args")
                if len(idx) != 3:
                    raise DocumentError("expected 3 arguments", f"{loc}.args")
                self._vector(rec.get("value", []), f"{loc}.value")

    def _indices(self, args, loc: str) -> list[int]:
        if not isinstance(args, list):
            raise DocumentError("args must be a list of basis names", loc)
        try:
            return [self.basis_names.index(a) for a in args]
        except ValueError:
            raise DocumentError(f"unknown basis name in {args}", loc) from None

    def _vector(self, entries, loc: str) -> tuple:
        if not isinstance(entries, list):
            raise DocumentError("value must be a list of {basis_name, scalar}", loc)
        out = [Scalar(0)] * self.dim
        used = set()
        for k, ent in enumerate(entries):
            eloc = f"{loc}[{k}]"
            if not isinstance(ent, Mapping) or set(ent) != {"basis_name", "scalar"}:
                raise DocumentError("entries need exactly 'basis_name' and 'scalar'", eloc)
            if ent["basis_name"] not in self.basis_names:
                raise DocumentError(f"unknown basis name {ent['basis_name']!r}", eloc)
            i = self.basis_names.index(ent["basis_name"])
            if i in used:
                raise DocumentError("basis name repeated", eloc)
            used.add(i)
            out[i] = self.scalar(ent["scalar"], f"{eloc}.scalar")
        return tuple(out)

    def _matrix(self, rows, loc: str) -> Matrix:
        if not isinstance(rows, list) or len(rows) != self.dim:
            raise DocumentError("map needs dim rows", loc)
        out = []
        for r, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != self.dim:
                raise DocumentError("map rows need dim entries", f"{loc}[{r}]")
            out.append(tuple(self.scalar(x, f"{loc}[{r}][{c}]") for c, x in enumerate(row)))
        return Matrix(self.dim, self.dim, tuple(out))

    # -- typed views ----------------------------------------------------------
    def map(self, name: str) -> Matrix:
        if name in self.maps:
            return self._matrix(self.maps[name], f"maps.{name}")
        if name == "identity":
            return Matrix.identity(self.dim)
        if name == "zero":
            return Matrix.zeros(self.dim)
        raise UnknownName(f"no map named {name!r}")

    def functional(self, name: str) -> Covector:
        if name in self.functionals:
            vals = self.functionals[name]
            return Covector(self.dim, tuple(self.scalar(v, f"functionals.{name}") for v in vals))
        if name == "zero":
            return Covector.zero(self.dim)
        raise UnknownName(f"no functional named {name!r}")

    def bracket_table(self) -> dict:
        return {
            tuple(self.basis_names.index(a) for a in rec["args"]): self._vector(rec["value"], f"brackets[{n}].value")
            for n, rec in enumerate(self.brackets)
        }

    def binary_algebra(self) -> BinaryAlgebra:
        if self.kind != "binary":
            raise DocumentError("not a binary document", "kind")
        return BinaryAlgebra.from_brackets(self.basis_names, self.bracket_table())

    def ternary_algebra(self) -> TernaryAlgebra:
        if self.kind != "ternary":
            raise DocumentError("not a ternary document", "kind")
        twist = (self.map(self.twist[0]), self.map(self.twist[1]))
        return TernaryAlgebra.from_brackets(self.basis_names, self.bracket_table(), twist)

    def expected_table(self) -> dict:
        return {
            tuple(self.basis_names.index(a) for a in rec["args"]): self._vector(rec["value"], "expected_induced")
            for rec in self.expected_induced or []
        }

    # -- constraints -------------------------------------------------------------
    def apply_constraints(self) -> "AlgebraDocument":
        """Copy with every constraint solved and substituted; ``eliminated`` records the values."""
        bindings: dict[str, Scalar] = {}
        for k, text in enumerate(self.constraints):
            expr = self.scalar(text, f"constraints[{k}]").substitute(bindings)
            if expr.is_zero():
                continue
            for name in identifiers_in(text):
                if name in bindings or expr.num.degree_in(name) != 1:
                    continue
                value = solve_for(expr, name)
                bindings = {p: v.substitute({name: value}) for p, v in bindings.items()}
                bindings[name] = value
                break
            else:
                raise DocumentError("no parameter occurs linearly", f"constraints[{k}]")
        out = self.map_scalars(lambda s: s.substitute(bindings))
        out.constraints = []
        out.eliminated = {**self.eliminated, **bindings}
        return out

    def map_scalars(self, fn) -> "AlgebraDocument":
        """Copy with ``fn`` applied to every scalar (results re-serialised)."""
        def conv(text, loc):
            return fn(self.scalar(text, loc)).to_text()

        def conv_vec(entries, loc):
            return [
                {"basis_name": e["basis_name"], "scalar": conv(e["scalar"], f"{loc}[{k}]")}
                for k, e in enumerate(entries)
            ]

        out = copy.deepcopy(self)
        out.brackets = [
            {"args": list(r["args"]), "value": conv_vec(r["value"], f"brackets[{n}].value")}
            for n, r in enumerate(self.brackets)
        ]
        out.maps = {
            name: [[conv(x, f"maps.{name}") for x in row] for row in rows] for name, rows in self.maps.items()
        }
        out.functionals = {
            name: [conv(x, f"functionals.{name}") for x in vals] for name, vals in self.functionals.items()
        }
        if self.expected_induced is not None:
            out.expected_induced = [
                {"args": list(r["args"]), "value": conv_vec(r["value"], "expected_induced")}
                for r in self.expected_induced
            ]
        return out

    # -- writing -------------------------------------------------------------------
    def _vector_record(self, vec: Sequence[Scalar]) -> list:
        return [
            {"basis_name": self.basis_names[i], "scalar": s.to_text()}
            for i, s in enumerate(vec)
            if not s.is_zero()
        ]

    def canonical_dict(self) -> dict:
        order = {name: i for i, name in enumerate(self.basis_names)}
        brackets = []
        table = self.bracket_table()
        for key in sorted(table):
            value = self._vector_record(table[key])
            if value:
                brackets.append({"args": [self.basis_names[i] for i in key], "value": value})
        out: dict = {
            "kind": self.kind,
            "dim": self.dim,
            "basis_names": list(self.basis_names),
            "params": list(self.params),
            "brackets": brackets,
            "maps": {
                name: [[s.to_text() for s in row] for row in self.map(name).entries] for name in sorted(self.maps)
            },
            "functionals": {
                name: [s.to_text() for s in self.functional(name).entries] for name in sorted(self.functionals)
            },
        }
        if self.constraints:
            # kept verbatim: the order of identifiers decides what gets eliminated
            out["constraints"] = list(self.constraints)
        if self.twist is not None:
            out["twist"] = list(self.twist)
        if self.provenance:
            out["provenance"] = self.provenance
        if self.expected_induced is not None:
            exp = self.expected_table()
            out["expected_induced"] = [
                {"args": [self.basis_names[i] for i in key], "value": self._vector_record(exp[key])}
                for key in sorted(exp, key=lambda k: tuple(order[self.basis_names[i]] for i in k))
            ]
        return out

    def dumps(self) -> str:
        return json.dumps(self.canonical_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def dump(self, path: str | Path) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8")

    # -- construction from algebras -------------------------------------------------------
    @classmethod
    def from_ternary(
        cls,
        T: TernaryAlgebra,
        params: Sequence[str],
        twist_names: tuple[str, str] = ("alpha1", "alpha2"),
        maps: Mapping[str, Matrix] | None = None,
        functionals: Mapping[str, Covector] | None = None,
        provenance: str | None = None,
    ) -> "AlgebraDocument":
        names = list(T.basis_names)
        doc = cls(kind="ternary", dim=T.dim, basis_names=names, params=list(params), provenance=provenance)
        for key in sorted(T.d):
            doc.brackets.append({"args": [names[i] for i in key], "value": doc._vector_record(T.d[key])})
        all_maps = dict(maps or {})
        for name, m in zip(twist_names, T.twist):
            all_maps.setdefault(name, m)
        doc.maps = {name: [[s.to_text() for s in row] for row in m.entries] for name, m in all_maps.items()}
        doc.functionals = {name: [s.to_text() for s in f.entries] for name, f in (functionals or {}).items()}
        doc.twist = list(twist_names)
        doc.validate()
        return doc

    @classmethod
    def from_binary(
        cls,
        A: BinaryAlgebra,
        params: Sequence[str],
        maps: Mapping[str, Matrix] | None = None,
        functionals: Mapping[str, Covector] | None = None,
        constraints: Sequence[str] = (),
        provenance: str | None = None,
    ) -> "AlgebraDocument":
        names = list(A.basis_names)
        doc = cls(kind="binary", dim=A.dim, basis_names=names, params=list(params), provenance=provenance)
        for key in sorted(A.c):
            doc.brackets.append({"args": [names[i] for i in key], "value": doc._vector_record(A.c[key])})
        doc.maps = {name: [[s.to_text() for s in row] for row in m.entries] for name, m in (maps or {}).items()}
        doc.functionals = {name: [s.to_text() for s in f.entries] for name, f in (functionals or {}).items()}
        doc.constraints = list(constraints)
        doc.validate()
        return doc


# ---------------------------------------------------------------------------
# packaged fixtures
# ---------------------------------------------------------------------------

def fixture_names() -> list[str]:
    root = resources.files("homnambu") / "fixtures"
    return sorted(p.name for p in root.iterdir() if p.name.endswith(".json"))


def fixture_path(name: str):
    if not name.endswith(".json"):
        name += ".json"
    return resources.files("homnambu") / "fixtures" / name


def load_fixture(name: str) -> AlgebraDocument:
    return AlgebraDocument.loads(fixture_path(name).read_text(encoding="utf-8"))


def resolve_input(path: str) -> AlgebraDocument:
    """Load ``path``; a bare name that is not a file falls back to a packaged fixture."""
    p = Path(path)
    if p.exists():
        return AlgebraDocument.load(p)
    if p.name == str(path) and fixture_path(p.name).is_file():
        return load_fixture(p.name)
    raise DocumentError(f"no such file or fixture: {path}", "--input")
