"""Presentation files: the line-oriented text format and its checked in-memory form.

Grammar (full EBNF in ``docs/format.md``)::

    category NAME
    object A B C
    mor f : A -> B
    identity A = e
    then(f, g) = h
    tangent [trivial]
      T obj A -> B
      T mor f -> g
      p A = f            # also z s l c n
      tn A 2 = auto      # or: tn A 2 = P : u v ; `*` stands for every object
    end
    system S : f g h
    algebra NAME
      prime 2
      basis 1 x
      unit 1 0
      mult i j k c       # e_i e_j has coefficient c on e_k
    end

Parsing never stops at the first problem: every diagnostic found in a pass
is reported with its line, column and offending token.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..fincat import FinCategory, Functor, validate_category, validate_functor
from ..limits import WidePullback, compute_nfold_pullback, universality
from ..ringcat import FiniteAlgebra
from ..tangent import COMPONENTS, TangentStructure, trivial_tangent

KINDS = ("syntax", "unknown-identifier", "duplicate", "non-composable", "typing",
         "conflict", "missing", "law")
COMPONENT_NAMES = COMPONENTS + ("n",)

_TOKEN = re.compile(r"->|[(),:=]|[^\s(),:=]+")
_IDENT = re.compile(r"[^\s(),:=#]+")


@dataclass(frozen=True)
class Diagnostic:
    kind: str
    line: int
    col: int
    token: str
    message: str

    def format(self, path: str = "<input>") -> str:
        return f"{path}:{self.line}:{self.col}: {self.kind}: {self.message} (at {self.token!r})"

    def as_dict(self):
        return {"kind": self.kind, "line": self.line, "col": self.col,
                "token": self.token, "message": self.message}


class PresentationError(Exception):
    def __init__(self, diagnostics: List[Diagnostic]):
        self.diagnostics = sorted(diagnostics, key=lambda d: (d.line, d.col, d.kind, d.message))
        super().__init__("\n".join(d.format() for d in self.diagnostics))


@dataclass(frozen=True)
class Tok:
    text: str
    line: int
    col: int


@dataclass
class TangentBlock:
    trivial: bool = False
    T_obj: Dict[str, str] = field(default_factory=dict)
    T_mor: Dict[str, str] = field(default_factory=dict)
    components: Dict[str, Dict[str, str]] = field(default_factory=dict)
    # (object or "*", n) -> None for auto, or (apex, projections)
    tn: Dict[Tuple[str, int], Optional[Tuple[str, Tuple[str, ...]]]] = field(default_factory=dict)


@dataclass
class AlgebraBlock:
    name: str
    prime: int
    basis: Tuple[str, ...]
    unit: Tuple[int, ...]
    mult: Dict[Tuple[int, int, int], int] = field(default_factory=dict)

    def build(self) -> FiniteAlgebra:
        d = len(self.basis)
        m = np.zeros((d, d, d), dtype=np.int64)
        for (i, j, k), c in self.mult.items():
            m[i, j, k] = c
        return FiniteAlgebra(self.prime, self.basis, m, list(self.unit), name=self.name)


@dataclass
class Presentation:
    name: Optional[str] = None
    objects: List[str] = field(default_factory=list)
    arrows: Dict[str, Tuple[str, str]] = field(default_factory=dict)
    identities: Dict[str, str] = field(default_factory=dict)
    composition: Dict[Tuple[str, str], str] = field(default_factory=dict)
    tangent: Optional[TangentBlock] = None
    systems: Dict[str, Tuple[str, ...]] = field(default_factory=dict)
    algebras: Dict[str, AlgebraBlock] = field(default_factory=dict)
    # built artefacts, filled by ``parse``; not part of equality
    built: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def has_category(self) -> bool:
        return self.name is not None

    @property
    def category(self) -> FinCategory:
        return self.built["category"]

    @property
    def functor(self) -> Optional[Functor]:
        return self.built.get("T")

    def tangent_structure(self) -> TangentStructure:
        """The full tangent structure; ``ValueError`` if the file only gives part of it."""
        ts = self.built.get("ts")
        if ts is None:
            raise ValueError(self.built.get("ts_missing", "the file has no tangent block"))
        return ts

    def system(self, name: str) -> Tuple[str, ...]:
        if name not in self.systems:
            raise KeyError(f"no system named {name!r}")
        return self.systems[name]

    def algebra_list(self) -> List[FiniteAlgebra]:
        return [self.built["algebras"][n] for n in self.algebras]


# ---------------------------------------------------------------------------
# lexing and statement parsing


def _lex(line: str, lineno: int) -> List[Tok]:
    body = line.split("#", 1)[0]
    return [Tok(m.group(), lineno, m.start() + 1) for m in _TOKEN.finditer(body)]


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.diags: List[Diagnostic] = []
        self.pres = Presentation()
        self.where: Dict[tuple, Tok] = {}

    # -- helpers
    def err(self, kind, tok: Tok, msg):
        self.diags.append(Diagnostic(kind, tok.line, tok.col, tok.text, msg))

    def ident(self, tok: Optional[Tok], what: str, anchor: Tok) -> Optional[str]:
        if tok is None:
            self.err("syntax", anchor, f"expected {what} at end of line")
            return None
        if not _IDENT.fullmatch(tok.text) or "->" in tok.text:
            self.err("syntax", tok, f"expected {what}")
            return None
        return tok.text

    def expect(self, toks, i, text, anchor) -> bool:
        if i >= len(toks):
            self.err("syntax", anchor, f"expected {text!r} at end of line")
            return False
        if toks[i].text != text:
            self.err("syntax", toks[i], f"expected {text!r}")
            return False
        return True

    def end_of(self, toks, i):
        if i < len(toks):
            self.err("syntax", toks[i], "unexpected trailing token")
            return False
        return True

    def declare(self, key, tok: Tok, what: str) -> bool:
        if key in self.where:
            first = self.where[key]
            self.err("duplicate", tok, f"{what} {tok.text!r} declared on line {tok.line}, "
                                       f"already declared on line {first.line}")
            return False
        self.where[key] = tok
        return True

    def define(self, key, tok: Tok, value, table: dict, tkey, what: str) -> None:
        """Record one cell; a repeat is a duplicate when equal, a conflict otherwise."""
        if key in self.where:
            first = self.where[key]
            kind = "duplicate" if table.get(tkey) == value else "conflict"
            verb = "repeated" if kind == "duplicate" else "redefined"
            self.err(kind, tok, f"{what} {verb} on line {tok.line}, first given on line {first.line}")
            return
        self.where[key] = tok
        table[tkey] = value

    # -- driver
    def run(self) -> Presentation:
        block = None  # ("tangent" | "algebra", start token, payload)
        for lineno, raw in enumerate(self.text.splitlines(), start=1):
            toks = _lex(raw, lineno)
            if not toks:
                continue
            head = toks[0]
            if block is not None:
                if head.text == "end":
                    self.end_of(toks, 1)
                    if block[0] == "algebra":
                        self._finish_algebra(block)
                    block = None
                elif block[0] == "tangent":
                    self._tangent_line(toks, block)
                else:
                    self._algebra_line(toks, block)
                continue
            handler = getattr(self, "_st_" + head.text.replace("-", "_"), None)
            if head.text == "end":
                self.err("syntax", head, "'end' outside a block")
            elif handler is None:
                self.err("syntax", head, "unknown statement")
            else:
                block = handler(toks) or None
        if block is not None:
            self.err("syntax", block[1], f"{block[0]} block is never closed with 'end'")
        return self.pres

    # -- top-level statements
    def _st_category(self, toks):
        name = self.ident(toks[1] if len(toks) > 1 else None, "a category name", toks[0])
        if name is None or not self.end_of(toks, 2):
            return
        if self.declare(("category",), toks[1], "category"):
            self.pres.name = name

    def _need_category(self, tok):
        if ("category",) not in self.where:
            self.err("syntax", tok, "statement before any 'category' line")
            return False
        return True

    def _st_object(self, toks):
        if not self._need_category(toks[0]):
            return
        if len(toks) == 1:
            self.err("syntax", toks[0], "expected at least one object name")
        for t in toks[1:]:
            name = self.ident(t, "an object name", toks[0])
            if name == "*":
                self.err("syntax", t, "'*' is reserved and cannot name an object")
                continue
            if name is not None and self.declare(("object", name), t, "object"):
                self.pres.objects.append(name)

    def _st_mor(self, toks):
        # mor f : A -> B
        if not self._need_category(toks[0]):
            return
        t = toks + [None] * (6 - len(toks)) if len(toks) < 6 else toks
        f = self.ident(t[1], "a morphism name", toks[0])
        if f is None or not self.expect(toks, 2, ":", toks[0]):
            return
        a = self.ident(t[3], "a domain object", toks[0])
        if a is None or not self.expect(toks, 4, "->", toks[0]):
            return
        b = self.ident(t[5], "a codomain object", toks[0])
        if b is None or not self.end_of(toks, 6):
            return
        if self.declare(("mor", f), toks[1], "morphism"):
            self.pres.arrows[f] = (a, b)
            self.where[("mor-dom", f)] = toks[3]
            self.where[("mor-cod", f)] = toks[5]

    def _st_identity(self, toks):
        # identity A = e
        if not self._need_category(toks[0]):
            return
        t = toks + [None] * 4
        a = self.ident(t[1], "an object name", toks[0])
        if a is None or not self.expect(toks, 2, "=", toks[0]):
            return
        e = self.ident(t[3], "a morphism name", toks[0])
        if e is None or not self.end_of(toks, 4):
            return
        self.define(("identity", a), toks[1], e, self.pres.identities, a, f"identity of {a!r}")
        self.where.setdefault(("identity-mor", e), toks[3])

    def _st_then(self, toks):
        # then ( f , g ) = h
        if not self._need_category(toks[0]):
            return
        t = toks + [None] * 8
        if not self.expect(toks, 1, "(", toks[0]):
            return
        f = self.ident(t[2], "a morphism name", toks[0])
        if f is None or not self.expect(toks, 3, ",", toks[0]):
            return
        g = self.ident(t[4], "a morphism name", toks[0])
        if g is None or not self.expect(toks, 5, ")", toks[0]):
            return
        if not self.expect(toks, 6, "=", toks[0]):
            return
        h = self.ident(t[7], "a morphism name", toks[0])
        if h is None or not self.end_of(toks, 8):
            return
        self.define(("then", f, g), toks[0], h, self.pres.composition, (f, g), f"then({f}, {g})")
        self.where[("then-args", f, g)] = (toks[2], toks[4], toks[7])

    def _st_system(self, toks):
        # system S : f g h
        t = toks + [None] * 3
        s = self.ident(t[1], "a system name", toks[0])
        if s is None or not self.expect(toks, 2, ":", toks[0]):
            return
        members = []
        for tok in toks[3:]:
            m = self.ident(tok, "a morphism name", toks[0])
            if m is None:
                return
            if m in members:
                self.err("duplicate", tok, f"morphism {m!r} listed twice in system {s!r}")
                continue
            members.append(m)
            self.where[("system-member", s, m)] = tok
        if self.declare(("system", s), toks[1], "system"):
            self.pres.systems[s] = tuple(members)

    def _st_tangent(self, toks):
        if not self._need_category(toks[0]):
            return
        if not self.declare(("tangent",), toks[0], "tangent block"):
            return ("tangent", toks[0], TangentBlock())  # parsed for diagnostics, then dropped
        tblock = TangentBlock()
        if len(toks) > 1:
            if toks[1].text != "trivial":
                self.err("syntax", toks[1], "expected 'trivial' or end of line")
                return None
            self.end_of(toks, 2)
            tblock.trivial = True
            self.pres.tangent = tblock
            return None
        self.pres.tangent = tblock
        return ("tangent", toks[0], tblock)

    def _st_algebra(self, toks):
        name = self.ident(toks[1] if len(toks) > 1 else None, "an algebra name", toks[0])
        if name is None or not self.end_of(toks, 2):
            return ("algebra", toks[0], None)
        fresh = self.declare(("algebra", name), toks[1], "algebra")
        return ("algebra", toks[0], {"name": name, "fresh": fresh, "fields": {}, "mult": {}})

    # -- tangent block
    def _tangent_line(self, toks, block):
        tblock: TangentBlock = block[2]
        head = toks[0]
        t = toks + [None] * 8
        if head.text == "T":
            kind = t[1].text if t[1] is not None else None
            if kind not in ("obj", "mor"):
                self.err("syntax", t[1] or head, "expected 'obj' or 'mor' after 'T'")
                return
            x = self.ident(t[2], "an identifier", head)
            if x is None or not self.expect(toks, 3, "->", head):
                return
            y = self.ident(t[4], "an identifier", head)
            if y is None or not self.end_of(toks, 5):
                return
            table = tblock.T_obj if kind == "obj" else tblock.T_mor
            self.define(("T", kind, x), t[2], y, table, x, f"T {kind} {x}")
            self.where[("T-val", kind, x)] = t[4]
        elif head.text in COMPONENT_NAMES:
            a = self.ident(t[1], "an object name", head)
            if a is None or not self.expect(toks, 2, "=", head):
                return
            f = self.ident(t[3], "a morphism name", head)
            if f is None or not self.end_of(toks, 4):
                return
            table = tblock.components.setdefault(head.text, {})
            self.define(("component", head.text, a), t[1], f, table, a, f"component {head.text} at {a}")
            self.where[("component-val", head.text, a)] = t[3]
        elif head.text == "tn":
            a = self.ident(t[1], "an object name or '*'", head)
            if a is None:
                return
            if t[2] is None or not t[2].text.isdigit() or int(t[2].text) < 1:
                self.err("syntax", t[2] or head, "expected a positive integer n")
                return
            n = int(t[2].text)
            if not self.expect(toks, 3, "=", head):
                return
            if t[4] is not None and t[4].text == "auto":
                if not self.end_of(toks, 5):
                    return
                value = None
            else:
                apex = self.ident(t[4], "'auto' or an apex object", head)
                if apex is None or not self.expect(toks, 5, ":", head):
                    return
                projs = []
                for tok in toks[6:]:
                    pr = self.ident(tok, "a projection", head)
                    if pr is None:
                        return
                    projs.append(pr)
                if len(projs) != n:
                    self.err("syntax", toks[-1], f"expected {n} projections, got {len(projs)}")
                    return
                value = (apex, tuple(projs))
                self.where[("tn-projs", a, n)] = tuple(toks[4:5] + toks[6:])
            self.define(("tn", a, n), t[1], value, tblock.tn, (a, n), f"tn {a} {n}")
        else:
            self.err("syntax", head, "unknown statement in tangent block")

    # -- algebra block
    def _algebra_line(self, toks, block):
        data = block[2]
        if data is None:
            return
        head = toks[0]
        fields = data["fields"]
        if head.text in ("prime", "basis", "unit"):
            if head.text in fields:
                first = fields[head.text][0]
                self.err("duplicate", head, f"{head.text!r} repeated on line {head.line}, "
                                            f"first given on line {first.line}")
                return
            if len(toks) < 2:
                self.err("syntax", head, f"expected values after {head.text!r}")
                return
            if head.text != "basis":
                for tk in toks[1:]:
                    if not tk.text.isdigit():
                        self.err("syntax", tk, "expected a non-negative integer")
                        return
            if head.text == "prime":
                self.end_of(toks, 2)
            fields[head.text] = (head, toks[1:])
        elif head.text == "mult":
            if len(toks) != 5:
                self.err("syntax", toks[min(len(toks), 5) - 1] if len(toks) > 5 else head,
                         "expected 'mult i j k coefficient'")
                return
            for tk in toks[1:]:
                if not tk.text.isdigit():
                    self.err("syntax", tk, "expected a non-negative integer")
                    return
            key = tuple(int(tk.text) for tk in toks[1:4])
            if key in data["mult"]:
                first = data["mult"][key][0]
                self.err("duplicate", head, f"structure constant {key} repeated on line {head.line}, "
                                            f"first given on line {first.line}")
                return
            data["mult"][key] = (head, toks[1:], int(toks[4].text))
        else:
            self.err("syntax", head, "unknown statement in algebra block")

    def _finish_algebra(self, block):
        data = block[2]
        if data is None or not data["fresh"]:
            return
        fields = data["fields"]
        for need in ("prime", "basis", "unit"):
            if need not in fields:
                self.err("missing", block[1], f"algebra {data['name']!r} has no {need!r} line")
                return
        prime_tok = fields["prime"][1][0]
        p = int(prime_tok.text)
        if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
            self.err("law", prime_tok, f"{p} is not a prime")
            return
        basis = tuple(tk.text for tk in fields["basis"][1])
        if len(set(basis)) != len(basis):
            self.err("duplicate", fields["basis"][0], "repeated basis label")
            return
        d = len(basis)
        unit_toks = fields["unit"][1]
        if len(unit_toks) != d:
            self.err("typing", fields["unit"][0], f"unit has {len(unit_toks)} coordinates, basis has {d}")
            return
        unit = tuple(int(tk.text) for tk in unit_toks)
        bad = [tk for tk, v in zip(unit_toks, unit) if v >= p]
        if bad:
            self.err("typing", bad[0], f"coordinate not reduced mod {p}")
            return
        mult = {}
        ok = True
        for key, (head, vals, c) in sorted(data["mult"].items()):
            if any(i >= d for i in key):
                self.err("typing", vals[[i >= d for i in key].index(True)], f"index out of range for dimension {d}")
                ok = False
            elif c >= p:
                self.err("typing", vals[3], f"coefficient not reduced mod {p}")
                ok = False
            elif c:
                mult[key] = c
        if not ok:
            return
        alg = AlgebraBlock(data["name"], p, basis, unit, mult)
        errs = alg.build().validate()
        if errs:
            self.err("law", block[1], f"algebra {data['name']!r} violates {', '.join(errs)}")
            return
        self.pres.algebras[data["name"]] = alg


# ---------------------------------------------------------------------------
# semantic checks and building


class _Builder:
    def __init__(self, parser: _Parser):
        self.pres = parser.pres
        self.where = parser.where
        self.err = parser.err
        self.diags = parser.diags

    def tok(self, *key) -> Tok:
        return self.where[key]

    def anchor(self, *keys) -> Tok:
        """First recorded position among ``keys``, else the category line."""
        for k in keys:
            if k in self.where:
                return self.where[k]
        return self.where[("category",)]

    def run(self):
        pres = self.pres
        if pres.has_category:
            cat = self.category()
            if cat is not None:
                pres.built["category"] = cat
                if pres.tangent is not None:
                    self.tangent(cat)
                self.systems(cat)
        self.algebras()

    def category(self) -> Optional[FinCategory]:
        pres = self.pres
        objs = set(pres.objects)
        start = len(self.diags)
        for f, (a, b) in pres.arrows.items():
            if a not in objs:
                self.err("unknown-identifier", self.tok("mor-dom", f), f"unknown object {a!r}")
            if b not in objs:
                self.err("unknown-identifier", self.tok("mor-cod", f), f"unknown object {b!r}")
        arrows = dict(pres.arrows)
        ids = {}
        for a, e in pres.identities.items():
            t = self.tok("identity", a)
            if a not in objs:
                self.err("unknown-identifier", t, f"unknown object {a!r}")
                continue
            if e in arrows and arrows[e] != (a, a):
                self.err("typing", self.tok("identity-mor", e),
                         f"{e!r} is typed {arrows[e][0]} -> {arrows[e][1]}, an identity of {a!r} must be {a} -> {a}")
                continue
            if e in ids.values():
                self.err("conflict", self.tok("identity-mor", e), f"{e!r} is already the identity of another object")
                continue
            ids[a] = e
            arrows[e] = (a, a)
        for a in pres.objects:
            if a not in ids:
                e = f"id_{a}"
                if e in arrows:
                    self.err("conflict", self.tok("mor", e),
                             f"{e!r} clashes with the automatic identity of {a!r}; add an 'identity {a} = ...' line")
                    continue
                ids[a] = e
                arrows[e] = (a, a)
        identity_names = set(ids.values())
        comp = {}
        for (f, g), h in pres.composition.items():
            tf, tg, th = self.where[("then-args", f, g)]
            bad = False
            for name, tk in ((f, tf), (g, tg), (h, th)):
                if name not in arrows:
                    self.err("unknown-identifier", tk, f"unknown morphism {name!r}")
                    bad = True
            if bad:
                continue
            if arrows[f][1] != arrows[g][0]:
                self.err("non-composable", self.tok("then", f, g),
                         f"cod {f} = {arrows[f][1]} but dom {g} = {arrows[g][0]}")
                continue
            if arrows[h] != (arrows[f][0], arrows[g][1]):
                self.err("typing", th, f"then({f}, {g}) must be {arrows[f][0]} -> {arrows[g][1]}, "
                                       f"{h!r} is {arrows[h][0]} -> {arrows[h][1]}")
                continue
            expect = g if f in identity_names else f if g in identity_names else None
            if expect is not None and h != expect:
                self.err("law", self.tok("then", f, g), f"identity law: then({f}, {g}) must be {expect!r}")
                continue
            comp[(f, g)] = h
        if len(self.diags) > start:
            return None
        for a, e in ids.items():
            for f, (x, y) in arrows.items():
                if y == a:
                    comp.setdefault((f, e), f)
                if x == a:
                    comp.setdefault((e, f), f)
        for f, (_, b) in sorted(arrows.items()):
            for g, (c, _) in sorted(arrows.items()):
                if c == b and (f, g) not in comp:
                    self.err("missing", self.anchor(("mor", f), ("mor", g)),
                             f"no composite given for then({f}, {g})")
        if len(self.diags) > start:
            return None
        cat = FinCategory(pres.objects, arrows, ids, comp, name=pres.name)
        for v in validate_category(cat).violations:
            c = v.cells
            keys = [("then",) + c[i:i + 2] for i in range(len(c) - 1)] + [("mor", x) for x in c]
            self.err("law", self.anchor(*keys), v.message)
        return None if len(self.diags) > start else cat

    def tangent(self, cat: FinCategory):
        tblock = self.pres.tangent
        if tblock.trivial:
            ts = trivial_tangent(cat)
            self.pres.built.update(T=ts.T, ts=ts)
            return
        start = len(self.diags)
        objs, mors = set(cat.objects), set(cat.morphisms)
        for x, y in tblock.T_obj.items():
            if x not in objs:
                self.err("unknown-identifier", self.tok("T", "obj", x), f"unknown object {x!r}")
            if y not in objs:
                self.err("unknown-identifier", self.tok("T-val", "obj", x), f"unknown object {y!r}")
        for x, y in tblock.T_mor.items():
            if x not in mors:
                self.err("unknown-identifier", self.tok("T", "mor", x), f"unknown morphism {x!r}")
            if y not in mors:
                self.err("unknown-identifier", self.tok("T-val", "mor", x), f"unknown morphism {y!r}")
        if len(self.diags) > start:
            return
        block = self.tok("tangent")
        missing = [a for a in cat.objects if a not in tblock.T_obj]
        if missing:
            self.err("missing", block, f"T obj is not given for {missing[0]!r}")
            return
        mor_map = dict(tblock.T_mor)
        for a in cat.objects:
            mor_map.setdefault(cat.identity(a), cat.identity(tblock.T_obj[a]))
        absent = [f for f in cat.morphisms if f not in mor_map]
        if absent:
            self.err("missing", block, f"T mor is not given for {absent[0]!r}")
            return
        for f, g in tblock.T_mor.items():
            want = (tblock.T_obj[cat.dom(f)], tblock.T_obj[cat.cod(f)])
            if (cat.dom(g), cat.cod(g)) != want:
                self.err("typing", self.tok("T-val", "mor", f),
                         f"T {f} must be {want[0]} -> {want[1]}, {g!r} is {cat.dom(g)} -> {cat.cod(g)}")
        if len(self.diags) > start:
            return
        T = Functor(cat, cat, dict(tblock.T_obj), mor_map)
        for v in validate_functor(T).violations:
            keys = [("T", "mor", x) for x in v.cells] + [("T", "obj", x) for x in v.cells]
            keys += [("then",) + tuple(v.cells)]
            at = next((self.where[k] for k in keys if k in self.where), block)
            self.err("law", at, "T is not a functor: " + v.message)
        if len(self.diags) > start:
            return
        self.pres.built["T"] = T
        self.components(cat, T, tblock, block, start)

    def components(self, cat, T, tblock, block, start):
        Tob = T.ob
        for name, table in tblock.components.items():
            for a, f in table.items():
                if a not in cat.objects:
                    self.err("unknown-identifier", self.tok("component", name, a), f"unknown object {a!r}")
                elif f not in cat.morphisms:
                    self.err("unknown-identifier", self.tok("component-val", name, a), f"unknown morphism {f!r}")
            absent = [a for a in cat.objects if a not in table]
            if absent:
                self.err("missing", block, f"component {name} is not given at {absent[0]!r}")
        if len(self.diags) > start:
            return
        comps = tblock.components
        # T_n witnesses
        tn: Dict[Tuple[str, int], WidePullback] = {}
        for (a, n), val in sorted(tblock.tn.items(), key=lambda kv: (kv[0][0] != "*", kv[0])):
            t = self.tok("tn", a, n)
            targets = list(cat.objects) if a == "*" else [a]
            if a != "*" and a not in cat.objects:
                self.err("unknown-identifier", t, f"unknown object {a!r}")
                continue
            if "p" not in comps:
                self.err("missing", t, "T_n witnesses need the projection p")
                continue
            for m in targets:
                if val is None:
                    w = compute_nfold_pullback(cat, comps["p"][m], n)
                    if w is None:
                        self.err("law", t, f"no {n}-fold pullback of p at {m!r} exists")
                        continue
                else:
                    w = self._explicit_witness(cat, comps["p"][m], m, n, a, val)
                    if w is None:
                        continue
                tn[(m, n)] = w
        if len(self.diags) > start:
            return
        typing = {
            "p": lambda a: (Tob(a), a), "z": lambda a: (a, Tob(a)),
            "l": lambda a: (Tob(a), Tob(Tob(a))), "c": lambda a: (Tob(Tob(a)), Tob(Tob(a))),
            "n": lambda a: (Tob(a), Tob(a)),
        }
        for name, table in comps.items():
            for a, f in table.items():
                if name == "s":
                    if (a, 2) not in tn:
                        continue
                    want = (tn[(a, 2)].apex, Tob(a))
                else:
                    want = typing[name](a)
                if (cat.dom(f), cat.cod(f)) != want:
                    self.err("typing", self.tok("component-val", name, a),
                             f"{name} at {a} must be {want[0]} -> {want[1]}, {f!r} is {cat.dom(f)} -> {cat.cod(f)}")
        if len(self.diags) > start:
            return
        need = [c for c in COMPONENTS if c not in comps]
        if need:
            self.pres.built["ts_missing"] = f"the tangent block gives T but not component(s) {', '.join(need)}"
            return
        no_t2 = [a for a in cat.objects if (a, 2) not in tn]
        if no_t2:
            self.pres.built["ts_missing"] = f"missing T_2 witness for object {no_t2[0]!r} (n=2)"
        ts = TangentStructure(T, dict(comps["p"]), dict(comps["z"]), dict(comps["s"]), dict(comps["l"]),
                              dict(comps["c"]), neg=dict(comps["n"]) if "n" in comps else None, tn=tn)
        self.pres.built["partial_ts"] = ts
        if not no_t2:
            self.pres.built["ts"] = ts

    def _explicit_witness(self, cat, p, m, n, a, val):
        apex, projs = val
        toks = self.where[("tn-projs", a, n)]
        if apex not in cat.objects:
            self.err("unknown-identifier", toks[0], f"unknown object {apex!r}")
            return None
        for pr, tk in zip(projs, toks[1:]):
            if pr not in cat.morphisms:
                self.err("unknown-identifier", tk, f"unknown morphism {pr!r}")
                return None
            if (cat.dom(pr), cat.cod(pr)) != (apex, cat.dom(p)):
                self.err("typing", tk, f"projection {pr!r} must be {apex} -> {cat.dom(p)}")
                return None
        maps = (p,) * n
        if len({cat.then(pr, p) for pr in projs}) > 1:
            self.err("law", toks[0], f"projections of tn {m} {n} do not form a cone over p")
            return None
        ok, med, _ = universality(cat, maps, apex, tuple(projs))
        if not ok:
            self.err("law", toks[0], f"tn {m} {n} is not a {n}-fold pullback of p")
            return None
        return WidePullback(maps, apex, tuple(projs), med)

    def systems(self, cat):
        for s, members in self.pres.systems.items():
            for m in members:
                if m not in cat.morphisms:
                    self.err("unknown-identifier", self.tok("system-member", s, m), f"unknown morphism {m!r}")

    def algebras(self):
        self.pres.built["algebras"] = {name: ab.build() for name, ab in self.pres.algebras.items()}


def parse_text(text: str) -> Presentation:
    """Parse and check a presentation; raise :class:`PresentationError` with every diagnostic."""
    p = _Parser(text)
    pres = p.run()
    if not p.diags:
        _Builder(p).run()
    if p.diags:
        raise PresentationError(p.diags)
    return pres


def parse(path) -> Presentation:
    with open(path, encoding="utf-8") as fh:
        return parse_text(fh.read())
