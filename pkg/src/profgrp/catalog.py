"""Named groups, their presentations, and module specs.

Group specs are short tags with colon-separated parameters::

    alt:5  sym:5  sl2:5  psl2:9  gl2detpm1:5  2alt:5  carmichael:3  rel43
    agl1half:11  frob:21  cyclic:15  elemab:2^3  q8  dihedral:4
    dp:(alt:5,cyclic:2)  sdp:(frob:21,natural,3)

Groups defined by a presentation are built by coset enumeration and come
with the relators re-checked on the resulting permutations.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .coset_enum import enumerate_cosets
from .field import GF, Field, is_prime
from .meataxe import endo_degree, heart, irreducibles, isomorphic
from .modules import (
    GModule,
    direct_sum,
    dual,
    hom_dim,
    inflate,
    permutation_module,
    regular_module,
    tensor,
    trivial_module,
    wedge2,
)
from .perm_group import PermGroup, Permutation, direct_product
from .presentations import Presentation, check_homomorphism, evaluate, parse_presentation

MAX_ALT_DEGREE = 9
MAX_SYM_DEGREE = 9
MAX_MATRIX_Q = 32
MAX_AFFINE_POINTS = 4096


class SpecError(ValueError):
    pass


# -- presentations ----------------------------------------------------------------------------


def carmichael_presentation(n: int) -> Presentation:
    """``x_i^3 = (x_i x_j)^2 = 1`` for ``i != j``: the alternating group of degree ``n + 2``."""
    names = [f"x{i}" for i in range(1, n + 1)]
    rels = [f"{x}^3" for x in names]
    rels += [f"({a}*{b})^2" for a, b in itertools.permutations(names, 2)]
    return parse_presentation(f"< {', '.join(names)} | {', '.join(rels)} >")


def double_cover_presentation(n: int) -> Presentation:
    """``x_i^3 = (x_i x_j)^2`` for ``i != j``: the double cover of ``A_{n+2}``."""
    names = [f"x{i}" for i in range(1, n + 1)]
    rels = [f"{a}^3 = ({a}*{b})^2" for a, b in itertools.permutations(names, 2)]
    if n == 1:
        rels = ["x1^6"]
    return parse_presentation(f"< {', '.join(names)} | {', '.join(rels)} >")


def rel43_presentation() -> Presentation:
    return parse_presentation(
        "< x, y, z | x^6, y^6, z^6, x^3 = (x*y)^2 = (y*x)^2, "
        "y^3 = (y*z)^2 = (z*y)^2, z^3 = (z*x)^2 = (x*z)^2 >"
    )


def bundled_presentation(name: str) -> Presentation:
    """A presentation shipped in ``profgrp/data/<name>.pres``."""
    from importlib.resources import files

    return parse_presentation((files("profgrp") / "data" / f"{name}.pres").read_text())


BUNDLED = {
    "carmichael_n3": lambda: carmichael_presentation(3),
    "double_cover_n3": lambda: double_cover_presentation(3),
    "rel43": rel43_presentation,
    "affine_half_p11": lambda: affine_half_presentation(11),
    "doubled_p11": lambda: doubled_presentation(11),
}


def _order_mod(a: int, p: int) -> int:
    k, x = 1, a % p
    while x != 1:
        x = x * a % p
        k += 1
    return k


def affine_parameters(p: int) -> tuple[int, int]:
    """``(e, s)``: the least ``e`` of multiplicative order ``(p-1)/2`` mod ``p``
    and ``s`` with ``s (e - 1) = -1`` mod ``p``."""
    if not is_prime(p) or p < 5:
        raise SpecError("need a prime p >= 5")
    half = (p - 1) // 2
    e = next(a for a in range(2, p) if _order_mod(a, p) == half)
    s = (-pow(e - 1, -1, p)) % p
    return e, s


def affine_half_presentation(p: int) -> Presentation:
    """``< u, v | u^p = v^((p-1)/2), (u^s)^v = u^(s-1) >``, the index-2
    subgroup of ``AGL(1, p)``."""
    e, s = affine_parameters(p)
    return parse_presentation(f"< u, v | u^{p} = v^{(p - 1) // 2}, (u^{s})^v = u^{s - 1} >")


def doubled_presentation(p: int) -> Presentation:
    """The two-generator group ``J`` built from the affine presentation with
    ``v = g^6`` and ``w = g^((p-1)/2)``; it maps onto ``2A_{p+2} x T``."""
    if p % 12 != 11:
        raise SpecError("need p = 11 mod 12")
    e, s = affine_parameters(p)
    h = (p - 1) // 2
    return parse_presentation(
        f"< g, u | u^{p} = g^{6 * h}, (u^{s})^(g^6) = u^{s - 1}, "
        f"(g^{h}*(g^{h})^u)^2 = g^{3 * h} >"
    )


def doubled_images_mod_center(p: int) -> tuple[list[Permutation], int]:
    """Images of ``g, u`` in ``A_{p+2} x T`` (acting on ``p + 2`` plus ``p``
    points) that make the relators of :func:`doubled_presentation` hold
    modulo the centre of the double cover.  Returns ``(images, degree)``."""
    e, _ = affine_parameters(p)
    n = 2 * p + 2
    u0 = [(x + 1) % p for x in range(p)]
    v0 = [e * x % p for x in range(p)]
    left_u = u0 + [p, p + 1]
    left_v = v0 + [p, p + 1]
    g0 = Permutation.from_cycles([[0, p, p + 1]], p + 2)
    left_g = (Permutation(left_v) * g0).a.tolist()
    shift = [x + p + 2 for x in range(p)]
    u = Permutation(left_u + [shift[y] for y in u0])
    g = Permutation(left_g + [shift[y] for y in v0])
    return [g, u], n


def check_doubled_relators(p: int = 11):
    P = doubled_presentation(p)
    images, _ = doubled_images_mod_center(p)
    return check_homomorphism(P, images)


# -- spec parsing -------------------------------------------------------------------------------

_INT_TAGS = {"alt", "sym", "sl2", "psl2", "gl2detpm1", "2alt", "carmichael", "agl1half",
             "frob", "cyclic", "dihedral"}
_BARE_TAGS = {"rel43", "q8"}


@dataclass(frozen=True)
class GroupSpec:
    tag: str
    params: tuple = ()

    def __str__(self) -> str:
        if self.tag in _BARE_TAGS:
            return self.tag
        if self.tag == "elemab":
            return f"elemab:{self.params[0]}^{self.params[1]}"
        if self.tag == "dp":
            return f"dp:({self.params[0]},{self.params[1]})"
        if self.tag == "sdp":
            return f"sdp:({self.params[0]},{self.params[1]},{self.params[2]})"
        return f"{self.tag}:{self.params[0]}"


def split_top_level(text: str, sep: str = ",") -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise SpecError(f"unbalanced parentheses in {text!r}")
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth:
        raise SpecError(f"unbalanced parentheses in {text!r}")
    parts.append("".join(cur))
    return [p.strip() for p in parts]


def _unwrap(text: str) -> str:
    """Strip one pair of parentheses enclosing the whole text."""
    text = text.strip()
    if not text.startswith("("):
        return text
    depth = 0
    for i, ch in enumerate(text):
        depth += ch == "("
        depth -= ch == ")"
        if depth == 0:
            return text[1:-1].strip() if i == len(text) - 1 else text
    raise SpecError(f"unbalanced parentheses in {text!r}")


def parse_group_spec(text: str) -> GroupSpec:
    text = text.strip()
    tag, _, arg = text.partition(":")
    tag = tag.strip()
    if tag in _BARE_TAGS:
        if arg:
            raise SpecError(f"{tag} takes no parameter")
        return GroupSpec(tag)
    if not arg:
        raise SpecError(f"group spec {text!r} needs a parameter")
    if tag in _INT_TAGS:
        if not re.fullmatch(r"\d+", arg.strip()):
            raise SpecError(f"{tag} needs an integer parameter, got {arg!r}")
        return GroupSpec(tag, (int(arg),))
    if tag == "elemab":
        m = re.fullmatch(r"\s*(\d+)\s*\^\s*(\d+)\s*", arg)
        if not m:
            raise SpecError("elemab expects p^d")
        return GroupSpec(tag, (int(m.group(1)), int(m.group(2))))
    if tag == "dp":
        parts = split_top_level(_unwrap(arg))
        if len(parts) != 2:
            raise SpecError("dp expects (spec,spec)")
        return GroupSpec(tag, (str(parse_group_spec(parts[0])), str(parse_group_spec(parts[1]))))
    if tag == "sdp":
        parts = split_top_level(_unwrap(arg))
        if len(parts) != 3 or not parts[2].isdigit():
            raise SpecError("sdp expects (H-spec,V-spec,e)")
        return GroupSpec(tag, (str(parse_group_spec(parts[0])), parts[1], int(parts[2])))
    raise SpecError(f"unknown group tag {tag!r}")


# -- built groups ---------------------------------------------------------------------------------


@dataclass
class CatalogGroup:
    spec: GroupSpec
    group: PermGroup
    tuple: tuple = ()  # marked generating tuple used for relation modules
    provenance: dict = field(default_factory=dict)
    presentation: Presentation | None = None
    field: Field | None = None  # natural field for matrix groups
    matrices: list | None = None  # natural matrices, one per generator
    parts: tuple = ()

    @property
    def name(self) -> str:
        return str(self.spec)

    def order(self) -> int:
        return self.group.order()

    def natural_module(self, F: Field | None = None) -> GModule:
        if self.matrices is None:
            raise SpecError(f"{self.spec} has no natural matrix module")
        if F is not None and F != self.field:
            raise SpecError(f"natural module of {self.spec} lives over {self.field}")
        return GModule(self.group, self.field, len(self.matrices[0]), self.matrices, "natural")


def _small_tuple(G: PermGroup, seed: int = 0) -> tuple:
    if len(G.generators) <= 2:
        return tuple(G.generators)
    k, witness = G.estimate_min_generators(trials=30, seed=seed)
    return tuple(witness)


def _finish(spec: GroupSpec, G: PermGroup, **kw) -> CatalogGroup:
    G.name = str(spec)
    cg = CatalogGroup(spec, G, **kw)
    if not cg.tuple:
        cg.tuple = _small_tuple(G)
    cg.provenance.setdefault("order", G.order())
    return cg


def _cycle(points: Sequence[int], n: int) -> Permutation:
    return Permutation.from_cycles([list(points)], n)


def _alternating(n: int) -> PermGroup:
    if n < 3:
        return PermGroup([Permutation.identity(max(n, 1))], max(n, 1))
    if n == 3:
        return PermGroup([_cycle([0, 1, 2], 3)], 3)
    long = list(range(n)) if n % 2 else list(range(1, n))
    return PermGroup([_cycle([0, 1, 2], n), _cycle(long, n)], n)


def _symmetric(n: int) -> PermGroup:
    if n < 2:
        return PermGroup([Permutation.identity(1)], 1)
    return PermGroup([_cycle([0, 1], n), _cycle(list(range(n)), n)], n)


def _vectors(F: Field, m: int) -> np.ndarray:
    """All vectors of ``F^m``, first coordinate fastest."""
    grid = np.indices((F.q,) * m).reshape(m, -1)[::-1].T
    return np.ascontiguousarray(grid, dtype=np.int64)


def _encode(V: np.ndarray, q: int) -> np.ndarray:
    return (V * (q ** np.arange(V.shape[1]))).sum(axis=1)


def _projective_normal(V: np.ndarray, F: Field) -> np.ndarray:
    lead = np.array([row[np.flatnonzero(row)[0]] for row in V])
    return F.mul(V, F.inv(lead)[:, None])


def matrix_permutations(mats: Sequence[np.ndarray], F: Field, projective: bool = False):
    """Right action ``v -> v A`` on nonzero vectors (or on projective points).
    Returns the permutations and the point representatives."""
    m = len(mats[0])
    V = _vectors(F, m)[1:]
    if projective:
        keep = [i for i, row in enumerate(V) if row[np.flatnonzero(row)[0]] == 1]
        V = V[keep]
    codes = _encode(V, F.q)
    lookup = {int(c): i for i, c in enumerate(codes)}
    perms = []
    for A in mats:
        W = F.matmul(V, A)
        if projective:
            W = _projective_normal(W, F)
        perms.append(Permutation([lookup[int(c)] for c in _encode(W, F.q)]))
    return perms, V


def _field_of(q: int) -> Field:
    for p in range(2, q + 1):
        if q % p == 0:
            k = round(math.log(q, p))
            if p ** k != q or not is_prime(p):
                raise SpecError(f"{q} is not a prime power")
            return GF(p, k)
    raise SpecError(f"{q} is not a prime power")


def sl2_matrices(F: Field, det_minus_one: bool = False) -> list[np.ndarray]:
    one = 1
    mats = [np.array([[one, one], [0, one]]), np.array([[one, 0], [one, one]])]
    if F.k > 1:
        w = F.primitive
        mats.append(np.array([[w, 0], [0, int(F.inv(w))]]))
    if det_minus_one and F.p != 2:
        mats.append(np.array([[int(F.neg(1)), 0], [0, 1]]))
    return [np.asarray(A, dtype=np.int64) for A in mats]


FROB21_MATRICES = (
    np.array([[0, 1, 0], [0, 0, 1], [1, 1, 0]], dtype=np.int64),  # companion matrix of t^3+t+1
    np.array([[1, 0, 0], [0, 0, 1], [0, 1, 1]], dtype=np.int64),  # squaring in F_8
)


def _present(spec: GroupSpec, P: Presentation, faithful_subgroup: list[str],
             max_cosets: int | None, strategy: str = "hlt") -> tuple[PermGroup, dict]:
    full = enumerate_cosets(P, (), max_cosets, strategy)
    order = full.index()
    sub = [P.word(w) for w in faithful_subgroup]
    small = enumerate_cosets(P, sub, max_cosets, strategy)
    G = small.to_group()
    if G.order() != order:
        raise RuntimeError(f"coset action of {spec} is not faithful")
    check = check_homomorphism(P, G.generators)
    if not check:
        raise RuntimeError(f"relator {check.failing_relator} fails on the coset permutations")
    prov = {
        "source": "presentation",
        "presentation": str(P),
        "enumerated_order": order,
        "action": f"cosets of <{', '.join(faithful_subgroup)}>" if faithful_subgroup else "regular",
        "degree": G.degree,
        "relators_verified": True,
    }
    return G, prov


def central_quotient_satisfies(G: PermGroup, P: Presentation) -> bool:
    Z = G.center()
    zset = {z.a.tobytes() for z in Z}
    return all(evaluate(r, G.generators, identity=G.identity()).a.tobytes() in zset for r in P.relators)


def build(spec: GroupSpec | str, max_cosets: int | None = None) -> CatalogGroup:
    if isinstance(spec, str):
        spec = parse_group_spec(spec)
    tag, params = spec.tag, spec.params
    if tag == "alt":
        n = params[0]
        if not 3 <= n <= MAX_ALT_DEGREE:
            raise SpecError(f"alt:n needs 3 <= n <= {MAX_ALT_DEGREE}")
        return _finish(spec, _alternating(n), provenance={"source": "permutations"})
    if tag == "sym":
        n = params[0]
        if not 2 <= n <= MAX_SYM_DEGREE:
            raise SpecError(f"sym:n needs 2 <= n <= {MAX_SYM_DEGREE}")
        return _finish(spec, _symmetric(n), provenance={"source": "permutations"})
    if tag in ("sl2", "psl2", "gl2detpm1"):
        q = params[0]
        if q > MAX_MATRIX_Q:
            raise SpecError(f"{tag}:q needs q <= {MAX_MATRIX_Q}")
        F = _field_of(q)
        mats = sl2_matrices(F, det_minus_one=tag == "gl2detpm1")
        perms, _ = matrix_permutations(mats, F, projective=tag == "psl2")
        if tag == "psl2":
            # scalar matrices act trivially; drop repeated or trivial images
            keep = [i for i, g in enumerate(perms) if not g.is_identity()]
            mats = None
            perms = [perms[i] for i in keep]
        G = PermGroup(perms, len(perms[0].a))
        return _finish(spec, G, field=F, matrices=mats,
                       provenance={"source": "matrices", "action": "projective points" if tag == "psl2" else "nonzero vectors"})
    if tag == "frob":
        if params[0] != 21:
            raise SpecError("only frob:21 is available")
        F = GF(2)
        mats = [A.copy() for A in FROB21_MATRICES]
        perms, _ = matrix_permutations(mats, F)
        G = PermGroup(perms, 7)
        if G.order() != 21:
            raise RuntimeError("frob:21 matrices do not generate a group of order 21")
        return _finish(spec, G, field=F, matrices=mats,
                       provenance={"source": "matrices", "action": "nonzero vectors of F_2^3"})
    if tag == "carmichael":
        n = params[0]
        if not 1 <= n <= 5:
            raise SpecError("carmichael:n needs 1 <= n <= 5")
        P = carmichael_presentation(n)
        G, prov = _present(spec, P, [f"x{i}" for i in range(2, n + 1)], max_cosets)
        return _finish(spec, G, presentation=P, provenance=prov)
    if tag == "2alt":
        N = params[0]
        n = N - 2
        if not 2 <= n <= 5:
            raise SpecError("2alt:N needs 4 <= N <= 7")
        P = double_cover_presentation(n)
        G, prov = _present(spec, P, ["x1^2"], max_cosets)
        Z = G.center()
        prov["center_order"] = len(Z)
        prov["central_quotient_satisfies_carmichael"] = central_quotient_satisfies(G, carmichael_presentation(n))
        if len(Z) != 2 or not prov["central_quotient_satisfies_carmichael"]:
            raise RuntimeError(f"{spec} failed the double cover certificate")
        return _finish(spec, G, presentation=P, provenance=prov)
    if tag == "rel43":
        P = rel43_presentation()
        G, prov = _present(spec, P, ["x^2"], max_cosets)
        Z = G.center()
        prov["center_order"] = len(Z)
        prov["perfect"] = G.is_perfect()
        x3 = G.generators[0] ** 3
        prov["x_cubed_central_involution"] = bool(x3.order() == 2 and any(z == x3 for z in Z))
        return _finish(spec, G, presentation=P, provenance=prov)
    if tag == "agl1half":
        p = params[0]
        if not is_prime(p) or p < 5 or p > 1000:
            raise SpecError("agl1half:p needs a prime 5 <= p <= 1000")
        e, s = affine_parameters(p)
        u = Permutation([(x + 1) % p for x in range(p)])
        v = Permutation([e * x % p for x in range(p)])
        G = PermGroup([u, v], p)
        P = affine_half_presentation(p)
        ok = bool(check_homomorphism(P, [u, v]))
        if not ok or G.order() != p * (p - 1) // 2:
            raise RuntimeError(f"{spec} failed its certificate")
        return _finish(spec, G, presentation=P, provenance={
            "source": "affine maps", "e": e, "s": s, "relators_verified": ok})
    if tag == "cyclic":
        n = params[0]
        if n < 1:
            raise SpecError("cyclic:n needs n >= 1")
        g = Permutation([(x + 1) % n for x in range(n)])
        return _finish(spec, PermGroup([g], n), provenance={"source": "permutations"})
    if tag == "dihedral":
        n = params[0]
        if n < 3:
            raise SpecError("dihedral:n needs n >= 3")
        r = Permutation([(x + 1) % n for x in range(n)])
        f = Permutation([(-x) % n for x in range(n)])
        return _finish(spec, PermGroup([r, f], n), provenance={"source": "permutations", "order": 2 * n})
    if tag == "q8":
        # right regular action on +-1, +-i, +-j, +-k (index 4 * sign + unit)
        table = {(0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
                 (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
                 (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
                 (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0)}

        def right_mult(unit):
            out = []
            for x in range(8):
                neg, a = divmod(x, 4)
                sign, b = table[(a, unit)]
                out.append(4 * ((neg + (sign < 0)) % 2) + b)
            return Permutation(out)

        return _finish(spec, PermGroup([right_mult(1), right_mult(2)], 8), provenance={"source": "quaternion units"})
    if tag == "elemab":
        p, d = params
        if not is_prime(p) or p ** d > MAX_AFFINE_POINTS or d < 1:
            raise SpecError("elemab:p^d needs p prime and p^d <= 4096")
        F = GF(p)
        V = _vectors(F, d)
        lookup = {int(c): i for i, c in enumerate(_encode(V, p))}
        gens = []
        for i in range(d):
            W = V.copy()
            W[:, i] = (W[:, i] + 1) % p
            gens.append(Permutation([lookup[int(c)] for c in _encode(W, p)]))
        return _finish(spec, PermGroup(gens, p ** d), provenance={"source": "translations"})
    if tag == "dp":
        A = build(params[0], max_cosets)
        B = build(params[1], max_cosets)
        G = direct_product(A.group, B.group)
        return _finish(spec, G, parts=(A, B), provenance={"source": "direct product"})
    if tag == "sdp":
        H = build(params[0], max_cosets)
        if params[1] != "natural":
            raise SpecError("sdp supports only the natural module of H")
        return semidirect_power(H, params[2], spec)
    raise SpecError(f"unknown group tag {tag!r}")


# -- semidirect powers -------------------------------------------------------------------------


def semidirect_power(H: CatalogGroup, e: int, spec: GroupSpec | None = None) -> CatalogGroup:
    """``V^e : H`` acting on the affine space ``V^e`` for the natural module
    ``V`` of a matrix group ``H`` over a prime field."""
    V = H.natural_module()
    F = V.field
    if F.k != 1:
        raise SpecError("semidirect powers need a prime field")
    m = V.dim
    n = m * e
    if F.q ** n > MAX_AFFINE_POINTS:
        raise SpecError(f"V^{e} has more than {MAX_AFFINE_POINTS} vectors")
    pts = _vectors(F, n)
    lookup = {int(c): i for i, c in enumerate(_encode(pts, F.q))}

    def perm_of(W):
        return Permutation([lookup[int(c)] for c in _encode(W, F.q)])

    gens, linear = [], []
    for A in V.dense_action():
        big = np.kron(np.eye(e, dtype=np.int64), A)
        gens.append(perm_of(F.matmul(pts, big)))
        linear.append(A)
    for k in range(e):
        W = pts.copy()
        W[:, k * m] = (W[:, k * m] + 1) % F.p
        gens.append(perm_of(W))
        linear.append(np.eye(m, dtype=np.int64))
    G = PermGroup(gens, F.q ** n)
    spec = spec or GroupSpec("sdp", (str(H.spec), "natural", e))
    order = G.order()
    expected = F.q ** n * H.order()
    if order != expected:
        raise RuntimeError(f"semidirect power has order {order}, expected {expected}")
    h_images = [H.group.generators[j] for j in range(len(H.group.generators))]
    identity = H.group.identity()
    images = h_images + [identity] * e
    cg = _finish(spec, G, parts=(H, e, tuple(images)), field=F,
                 provenance={"source": "affine action", "V_dim": m, "e": e})
    return cg


def sdp_quotient_images(cg: CatalogGroup) -> tuple:
    """Images in ``H`` of the generators of a semidirect power."""
    return cg.parts[2]


# -- module specs -------------------------------------------------------------------------------


def build_module(cg: CatalogGroup, F: Field, text: str, seed: int = 0, deep: bool = False) -> GModule:
    """Module spec language: ``trivial | perm | heart | regular | natural |
    irr:<i> | dual:<spec> | tensor:<spec>,<spec> | wedge2:<spec>``, with
    parentheses allowed for grouping."""
    text = _unwrap(text.strip())
    G = cg.group
    head, _, rest = text.partition(":")
    if text == "trivial":
        return trivial_module(G, F)
    if text == "perm":
        return permutation_module(G, F)
    if text == "heart":
        return heart(permutation_module(G, F), seed)
    if text == "regular":
        return regular_module(G, F)
    if text == "natural":
        return cg.natural_module(F)
    if head == "irr":
        if not rest.isdigit():
            raise SpecError("irr needs an index")
        mods = irreducibles(G, F, seed, deep=deep)
        i = int(rest)
        if i >= len(mods):
            raise SpecError(f"irr:{i} out of range ({len(mods)} irreducibles)")
        return mods[i]
    if head == "dual":
        M = build_module(cg, F, rest, seed, deep)
        out = dual(M)
        out.name = f"dual:{M.name}"
        return out
    if head == "wedge2":
        M = build_module(cg, F, rest, seed, deep)
        out = wedge2(M)
        out.name = f"wedge2:{M.name}"
        return out
    if head == "tensor":
        parts = split_top_level(_unwrap(rest))
        if len(parts) != 2:
            raise SpecError("tensor expects two module specs")
        A = build_module(cg, F, parts[0], seed, deep)
        B = build_module(cg, F, parts[1], seed, deep)
        out = tensor(A, B)
        out.name = f"tensor:({A.name},{B.name})"
        return out
    raise SpecError(f"unknown module spec {text!r}")


def parse_char(text: str) -> Field:
    """``p`` or ``p,k``."""
    parts = [t.strip() for t in text.split(",")]
    try:
        nums = [int(t) for t in parts]
    except ValueError:
        raise SpecError(f"bad characteristic {text!r}") from None
    if len(nums) == 1:
        return GF(nums[0])
    if len(nums) == 2:
        return GF(nums[0], nums[1])
    raise SpecError(f"bad characteristic {text!r}")


# -- orbit counts on pairs -----------------------------------------------------------------------


def pair_orbit_counts(G: PermGroup) -> tuple[int, int]:
    """Numbers of orbits on ordered pairs of distinct points and on
    2-element subsets."""
    n = G.degree
    label = np.full((n, n), -1)
    count = 0
    for a in range(n):
        for b in range(n):
            if a == b or label[a, b] >= 0:
                continue
            stack = [(a, b)]
            label[a, b] = count
            while stack:
                x, y = stack.pop()
                for g in G.generators:
                    u, v = int(g.a[x]), int(g.a[y])
                    if label[u, v] < 0:
                        label[u, v] = count
                        stack.append((u, v))
            count += 1
    unordered = set()
    for a in range(n):
        for b in range(a + 1, n):
            unordered.add(frozenset((label[a, b], label[b, a])))
    return count, len(unordered)


# -- non-proficient semidirect powers ------------------------------------------------------------


def d_formula(d_H: int, e: int, s_prime: int) -> int:
    """``max(d(H), 2 + floor((e - 1) / s'))`` for the minimal number of
    generators of ``V^e : H``."""
    return max(d_H, 2 + (e - 1) // s_prime)


@dataclass
class Section7Report:
    H: str
    V_dim: int
    e: int
    U_dims: list
    closed_h1: list
    closed_h2: list
    nu2: list
    multiplicity_bound: int
    nu2_lower_bound: int
    nu2_trivial_max: int
    s_prime: int
    d_H: int
    d_formula: int
    engine: dict | None
    verdict: str

    def to_json(self) -> dict:
        from dataclasses import asdict

        return asdict(self)


def section7_report(H_spec: str, e: int, engine_bound: int = 2000, seed: int = 0) -> Section7Report:
    """Non-proficiency of ``V^e : H`` for the natural module ``V`` of ``H``.

    With ``p`` not dividing ``|H|`` the cohomology of ``G = V^e : H`` in an
    ``H``-module ``U`` is ``h1 = Hom_H(V^e, U)`` and
    ``h2 = h1 + Hom_H(wedge^2(V^e), U)``.  Every composition factor ``U`` of
    ``wedge^2 V`` occurs at least ``e(e+1)/2`` times in ``wedge^2(V^e)``, and
    ``V`` not being self-dual keeps the trivial module out of both, so the
    Schur multiplier of ``G`` is that of ``H``.
    """
    from .cohomology import cohomology, schur_min_generators
    from .meataxe import chop, is_irreducible

    H = build(H_spec)
    V = H.natural_module()
    F = V.field
    if H.order() % F.p == 0:
        raise SpecError(f"characteristic {F.p} divides |H| = {H.order()}")
    if V.dim < 2 or not is_irreducible(V, seed):
        raise SpecError("V must be irreducible of dimension > 1")
    if isomorphic(V, dual(V), irreducible=True):
        raise SpecError("V must not be self-dual")
    We = V
    for _ in range(e - 1):
        We = direct_sum(We, V)
    W2 = wedge2(We)
    factors = []
    for X in chop(wedge2(V), seed):
        if not any(isomorphic(X, Y, irreducible=True) for Y in factors):
            factors.append(X)
    h1s, h2s, nus = [], [], []
    for U in factors:
        a1 = hom_dim(We, U)
        a2 = a1 + hom_dim(W2, U)
        h1s.append(a1)
        h2s.append(a2)
        nus.append(-(-(a2 - a1) // U.dim))
    mult = e * (e + 1) // 2
    lower = -(-mult // max(U.dim for U in factors))
    nu_trivial = 1 + schur_min_generators(H.group)
    s_prime = V.dim // endo_degree(V)
    d_H = H.group.estimate_min_generators(seed=seed)[0]
    engine = None
    if F.q ** (V.dim * e) * H.order() <= engine_bound:
        G = semidirect_power(H, e)
        rows = []
        for U, a1, a2 in zip(factors, h1s, h2s):
            UG = inflate(U, G.group, sdp_quotient_images(G), name=U.name)
            rep = cohomology(G.group, UG, G.tuple)
            rows.append({"dim": U.dim, "h1": rep.h1, "h2": rep.h2, "closed_h1": a1, "closed_h2": a2,
                         "agree": rep.h1 == a1 and rep.h2 == a2})
        engine = {"order": G.order(), "rows": rows}
    verdict = "not-proficient" if max(nus) > nu_trivial else "undecided"
    return Section7Report(str(H.spec), V.dim, e, [U.dim for U in factors], h1s, h2s, nus, mult, lower,
                          nu_trivial, s_prime, d_H, d_formula(d_H, e, s_prime), engine, verdict)
