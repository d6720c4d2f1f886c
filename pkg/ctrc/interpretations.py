"""
Interpretations of transformed systems: reading interpretation files, expanding
recipe tables into one function per symbol, and checking compatibility on a
grid of valuations.

Interpretation file lines (`#` starts a comment line):

    DIRECT f(x1,...,xk) = expr              one function per transformed symbol, over N
    FUN i f(x1,...,xn) = expr               J_f^i
    COND f i j (x1,...,xn; y1,...,yj) = expr     J_{f,i}^j
    SIZE f(x1,...,xn) = expr                S_f
    COST i f(cx1,...; sx1,...) = expr       C_f^i
    CSIZE f i j (sx1,...; sy1,...) = expr   S_{f,i}^j
    CCOST f i j (cx1,...; cy1,...; sx1,...; sy1,...) = expr    C_{f,i}^j
    MAP f = {1,3}                           usable replacement map entry
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass, field

from loguru import logger

from ctrc.arith import ArithExpr, Const, Max, Ref, add_all, parse_expr, times
from ctrc.cctrs import CCTRS
from ctrc.errors import MissingComponent, ParseError, UnsupportedMode
from ctrc.terms import BOT, TOP, App, Term, Var, positions, subterm_at, variables
from ctrc.transform import TransformedRule, TransformedTRS, progress_name

RECIPES = ("direct", "A", "B", "C")


@dataclass(frozen=True)
class Entry:
    groups: tuple  # parameter names, one tuple per `;`-separated group
    expr: ArithExpr
    line: int


@dataclass
class InterpretationFile:
    direct: dict = field(default_factory=dict)  # name -> Entry
    fun: dict = field(default_factory=dict)  # (f, i) -> Entry
    cond: dict = field(default_factory=dict)  # (f, i, j) -> Entry
    size: dict = field(default_factory=dict)  # f -> Entry
    cost: dict = field(default_factory=dict)  # (f, i) -> Entry
    csize: dict = field(default_factory=dict)  # (f, i, j) -> Entry
    ccost: dict = field(default_factory=dict)  # (f, i, j) -> Entry
    usable: dict = field(default_factory=dict)  # f -> frozenset

    def infer_recipe(self) -> str:
        if self.direct:
            return "direct"
        if self.size or self.cost:
            return "C"
        if self.usable:
            return "B"
        return "A"


_HEADS = {
    "DIRECT": re.compile(r"(?P<f>[^\s(]+)\s*(?:\((?P<params>.*)\))?"),
    "FUN": re.compile(r"(?P<i>\d+)\s+(?P<f>[^\s(]+)\s*(?:\((?P<params>.*)\))?"),
    "SIZE": re.compile(r"(?P<f>[^\s(]+)\s*(?:\((?P<params>.*)\))?"),
    "COST": re.compile(r"(?P<i>\d+)\s+(?P<f>[^\s(]+)\s*(?:\((?P<params>.*)\))?"),
    "COND": re.compile(r"(?P<f>\S+)\s+(?P<i>\d+)\s+(?P<j>\d+)\s*\((?P<params>.*)\)"),
    "CSIZE": re.compile(r"(?P<f>\S+)\s+(?P<i>\d+)\s+(?P<j>\d+)\s*\((?P<params>.*)\)"),
    "CCOST": re.compile(r"(?P<f>\S+)\s+(?P<i>\d+)\s+(?P<j>\d+)\s*\((?P<params>.*)\)"),
}
_GROUPS = {"DIRECT": 1, "FUN": 1, "SIZE": 1, "COST": 2, "COND": 2, "CSIZE": 2, "CCOST": 4}


def _split_params(text: str | None, count: int, number: int) -> tuple:
    if text is None or not text.strip():
        return ((),) * count
    groups = [tuple(p.strip() for p in g.split(",") if p.strip()) for g in text.split(";")]
    if len(groups) != count:
        raise ParseError(f"line {number}: expected {count} parameter group(s) separated by ';', got {len(groups)}")
    return tuple(groups)


def parse_interpretation(text: str) -> InterpretationFile:
    parsed = InterpretationFile()
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if " = " not in line:
            raise ParseError(f"line {number}: expected 'HEAD = value' but got {line!r}")
        head, value = line.split(" = ", 1)
        keyword, _, rest = head.strip().partition(" ")

        if keyword == "MAP":
            body = value.strip()
            if not (body.startswith("{") and body.endswith("}")):
                raise ParseError(f"line {number}: MAP needs a set such as {{1,2}}")
            indices = [p.strip() for p in body[1:-1].split(",") if p.strip()]
            if not all(p.isdigit() for p in indices):
                raise ParseError(f"line {number}: MAP positions must be numbers")
            parsed.usable[rest.strip()] = frozenset(int(p) for p in indices)
            continue

        pattern = _HEADS.get(keyword)
        m = pattern.fullmatch(rest.strip()) if pattern else None
        if m is None:
            raise ParseError(f"line {number}: cannot read {head.strip()!r}")
        entry = Entry(_split_params(m.group("params"), _GROUPS[keyword], number), parse_expr(value), number)
        f = m.group("f")
        fields_ = m.groupdict()
        match keyword:
            case "DIRECT":
                parsed.direct[f] = entry
            case "FUN":
                parsed.fun[(f, int(fields_["i"]))] = entry
            case "SIZE":
                parsed.size[f] = entry
            case "COST":
                parsed.cost[(f, int(fields_["i"]))] = entry
            case "COND":
                parsed.cond[(f, int(fields_["i"]), int(fields_["j"]))] = entry
            case "CSIZE":
                parsed.csize[(f, int(fields_["i"]), int(fields_["j"]))] = entry
            case "CCOST":
                parsed.ccost[(f, int(fields_["i"]), int(fields_["j"]))] = entry
    return parsed


def load_interpretation(path: str) -> InterpretationFile:
    with open(path, "r") as stream:
        return parse_interpretation(stream.read())


@dataclass(frozen=True)
class SymbolInterp:
    """Function of a transformed symbol: one expression over N, or (cost, size) over N x N."""

    params: tuple
    exprs: tuple

    def __str__(self):
        values = ", ".join(str(e) for e in self.exprs)
        return f"({', '.join(self.params)}) = {values if len(self.exprs) == 1 else '(' + values + ')'}"


@dataclass
class Interpretation:
    recipe: str
    domain: str  # "nat" or "pair"
    table: dict  # symbol name -> SymbolInterp
    trs: TransformedTRS
    mu: dict  # positions that must be strictly monotone
    upsilon: dict | None = None

    @property
    def pair(self) -> bool:
        return self.domain == "pair"

    def top(self):
        return (0, 1) if self.pair else 1

    def apply(self, name: str, args: list):
        sym = self.table[name]
        env = {}
        for p, v in zip(sym.params, args):
            if self.pair:
                env[f"{p}.c"], env[f"{p}.s"] = v
            else:
                env[p] = v
        values = tuple(e.eval(env) for e in sym.exprs)
        return values if self.pair else values[0]

    def value(self, t: Term, valuation: dict):
        if isinstance(t, Var):
            return valuation[t.name]
        return self.apply(t.name, [self.value(a, valuation) for a in t.args])

    def gt(self, a, b) -> bool:
        if self.pair:
            return a[0] > b[0] and a[1] >= b[1]
        return a > b

    def ge(self, a, b) -> bool:
        if self.pair:
            return a[0] >= b[0] and a[1] >= b[1]
        return a >= b

    def cost(self, v) -> int:
        return v[0] if self.pair else v

    def render(self) -> list[str]:
        return [f"{name}{self.table[name]}" for name in self.table]


def _bind(entry: Entry, targets: list, label: str) -> ArithExpr:
    """Rename an entry's parameters group by group to the given reference names."""
    if len(entry.groups) != len(targets) or any(len(g) != len(t) for g, t in zip(entry.groups, targets)):
        shape = "; ".join(str(len(t)) for t in targets)
        raise ParseError(f"line {entry.line}: {label} needs parameter groups of sizes {shape}")
    mapping = {}
    for group, names in zip(entry.groups, targets):
        for p, name in zip(group, names):
            mapping[p] = Ref(name)
    return entry.expr.substitute(mapping)


def _need(table: dict, key, label: str) -> Entry:
    if key not in table:
        raise MissingComponent(f"Missing {label}")
    return table[key]


def _progress_layout(n: int, m: int, i: int, j: int) -> tuple:
    xs = tuple(f"x{k}" for k in range(1, n + 1))
    ys = tuple(f"y{k}" for k in range(1, j + 1))
    params = xs + tuple(f"c{k}" for k in range(1, i)) + ys + tuple(f"c{k}" for k in range(i + 1, m + 1))
    return xs, ys, params


def _build_direct(source: InterpretationFile, trs: TransformedTRS) -> dict:
    table = {}
    for s in trs.symbols:
        if s.name in (TOP, BOT):
            continue
        entry = _need(source.direct, s.name, f"DIRECT {s.name}")
        names = tuple(f"x{k}" for k in range(1, s.arity + 1))
        table[s.name] = SymbolInterp(names, (_bind(entry, [names], f"DIRECT {s.name}"),))
    return table


def _build_recipe_ab(source: InterpretationFile, trs: TransformedTRS) -> dict:
    system = trs.system
    table = {}
    for name in system.constructors:
        xs = tuple(f"x{k}" for k in range(1, system.arity[name] + 1))
        j0 = _bind(_need(source.fun, (name, 0), f"FUN 0 {name}"), [xs], f"FUN 0 {name}")
        table[name] = SymbolInterp(xs, (j0,))

    parts = {}
    for name in system.defined:
        n, m = system.arity[name], system.m(name)
        xs = tuple(f"x{k}" for k in range(1, n + 1))
        parts[name] = [_bind(_need(source.fun, (name, k), f"FUN {k} {name}"), [xs], f"FUN {k} {name}") for k in range(m + 1)]
        cs = tuple(f"c{k}" for k in range(1, m + 1))
        table[name] = SymbolInterp(xs + cs, (add_all([parts[name][0]] + [times(Ref(c), parts[name][k]) for k, c in enumerate(cs, start=1)]),))

    for rule in system.rules:
        f, i = rule.root, rule.index
        n, m = system.arity[f], system.m(f)
        for j in range(1, len(rule.conditions) + 1):
            xs, ys, params = _progress_layout(n, m, i, j)
            label = f"COND {f} {i} {j}"
            cond = _bind(_need(source.cond, (f, i, j), label), [xs, ys], label)
            others = [times(Ref(f"c{k}"), parts[f][k]) for k in range(1, m + 1) if k != i]
            table[progress_name(f, i, j)] = SymbolInterp(params, (add_all([parts[f][0], cond] + others),))
    return table


def _build_recipe_c(source: InterpretationFile, trs: TransformedTRS) -> dict:
    system = trs.system
    table = {}

    def refs(names, part):
        return [f"{x}.{part}" for x in names]

    size_of, costs_of = {}, {}
    for name in system.constructors + system.defined:
        n, m = system.arity[name], system.m(name)
        xs = tuple(f"x{k}" for k in range(1, n + 1))
        size_of[name] = _bind(_need(source.size, name, f"SIZE {name}"), [refs(xs, "s")], f"SIZE {name}")
        costs_of[name] = [
            _bind(_need(source.cost, (name, k), f"COST {k} {name}"), [refs(xs, "c"), refs(xs, "s")], f"COST {k} {name}")
            for k in range(m + 1)
        ]
        cs = tuple(f"c{k}" for k in range(1, m + 1))
        cost = add_all([costs_of[name][0]] + [times(Ref(f"{c}.s"), costs_of[name][k]) for k, c in enumerate(cs, start=1)])
        table[name] = SymbolInterp(xs + cs, (cost, size_of[name]))

    for rule in system.rules:
        f, i = rule.root, rule.index
        n, m = system.arity[f], system.m(f)
        for j in range(1, len(rule.conditions) + 1):
            xs, ys, params = _progress_layout(n, m, i, j)
            size_label, cost_label = f"CSIZE {f} {i} {j}", f"CCOST {f} {i} {j}"
            csize = _bind(_need(source.csize, (f, i, j), size_label), [refs(xs, "s"), refs(ys, "s")], size_label)
            ccost = _bind(
                _need(source.ccost, (f, i, j), cost_label),
                [refs(xs, "c"), refs(ys, "c"), refs(xs, "s"), refs(ys, "s")],
                cost_label,
            )
            others = [times(Ref(f"c{k}.s"), costs_of[f][k]) for k in range(1, m + 1) if k != i]
            cost = add_all([costs_of[f][0], ccost] + others)
            size = size_of[f] if csize == Const(0) else Max((size_of[f], csize))
            table[progress_name(f, i, j)] = SymbolInterp(params, (cost, size))
    return table


def build(source: InterpretationFile, trs: TransformedTRS, recipe: str | None = None) -> Interpretation:
    """
    Expand an interpretation file into one function per transformed symbol.

    Args:
        source (InterpretationFile): parsed tables.
        trs (TransformedTRS): the transformed system the tables describe.
        recipe (str): "direct", "A", "B" or "C"; inferred from the file when omitted.

    Returns:
        Interpretation: expanded table and the positions whose strict monotonicity is required.
    """
    recipe = recipe or source.infer_recipe()
    if recipe not in RECIPES:
        raise ValueError(f"Unknown recipe {recipe}")

    upsilon = None
    match recipe:
        case "direct":
            table, domain = _build_direct(source, trs), "nat"
        case "A":
            table, domain = _build_recipe_ab(source, trs), "nat"
        case "B":
            table, domain = _build_recipe_ab(source, trs), "nat"
            upsilon = dict(source.usable) if source.usable else derive_usable_map(trs.system)
        case "C":
            table, domain = _build_recipe_c(source, trs), "pair"
            upsilon = dict(source.usable) if source.usable else None

    # Recipes fix top and bot: 1 and 0 over N, (0,1) and (0,0) over N x N
    if domain == "pair":
        table[TOP], table[BOT] = SymbolInterp((), (Const(0), Const(1))), SymbolInterp((), (Const(0), Const(0)))
    else:
        table[TOP], table[BOT] = SymbolInterp((), (Const(1),)), SymbolInterp((), (Const(0),))

    mu = trs.with_map(upsilon).mu if upsilon is not None else dict(trs.mu)
    logger.info(f"Built {recipe} interpretation for {len(table)} symbols over {domain}")
    return Interpretation(recipe, domain, table, trs, mu, upsilon)


@dataclass(frozen=True)
class RuleVerdict:
    rule: str
    status: str  # STRICT, WEAK or VIOLATED
    valuation: tuple | None = None

    def __str__(self):
        return f"RULE {self.rule} {self.status}" + (f" {show_valuation(self.valuation)}" if self.valuation else "")


@dataclass(frozen=True)
class MonoVerdict:
    symbol: str
    position: int
    kind: str  # STRICT or WEAK
    ok: bool
    valuation: tuple | None = None

    def __str__(self):
        text = f"MONO {self.symbol} {self.position} {self.kind} {'OK' if self.ok else 'VIOLATED'}"
        return text + (f" {show_valuation(self.valuation)}" if self.valuation else "")


def show_valuation(valuation: tuple) -> str:
    return ",".join(f"{name}={_fmt(v)}" for name, v in valuation)


def _fmt(v) -> str:
    return f"({v[0]},{v[1]})" if isinstance(v, tuple) else str(v)


@dataclass
class CheckReport:
    recipe: str
    grid: int
    rules: list
    mono: list
    sampled: bool = True

    @property
    def passed(self) -> bool:
        return all(r.status != "VIOLATED" for r in self.rules) and all(m.ok for m in self.mono)

    def lines(self) -> list[str]:
        caveat = f"sampled on grid 0..{self.grid}" if self.sampled else f"grid 0..{self.grid}"
        return [str(r) for r in self.rules] + [str(m) for m in self.mono] + [
            f"RESULT {'PASS' if self.passed else 'FAIL'} ({caveat})"
        ]


def grid_points(grid: int, names: list, pair: bool, limit: int) -> list:
    """Valuations of `names` over the grid, shrunk (keeping 0, 1 and grid) or sampled to stay under limit."""
    values = list(range(grid + 1))
    components = len(names) * (2 if pair else 1)
    while len(values) > 3 and len(values) ** components > limit:
        values.pop(2)
    points = [(a, b) for a in values for b in values] if pair else values
    if len(points) ** len(names) <= limit:
        return [tuple(zip(names, combo)) for combo in itertools.product(points, repeat=len(names))]

    logger.warning(f"Sampling {limit} of {len(points) ** len(names)} valuations for {len(names)} variables")
    rng = random.Random(0)
    found = [tuple((x, points[0]) for x in names), tuple((x, points[-1]) for x in names)]
    found += [tuple((x, rng.choice(points)) for x in names) for _ in range(limit - 2)]
    return found


def rule_values(interp: Interpretation, rule: TransformedRule, valuation: tuple) -> tuple:
    """Both sides of a rule under a valuation; lets a reported violation be replayed."""
    env = dict(valuation)
    return interp.value(rule.lhs, env), interp.value(rule.rhs, env)


def check(interp: Interpretation, grid: int = 4, max_valuations: int = 50000) -> CheckReport:
    """
    Check rule orientation and monotonicity on a grid of valuations.

    Cost-1 rules must decrease strictly, the others weakly. Every symbol must
    be strictly monotone in its required positions.
    """
    rule_verdicts = []
    for rule in interp.trs.rules:
        names = list(dict.fromkeys(variables(rule.lhs) + variables(rule.rhs)))
        status = "STRICT"
        witness = None
        for valuation in grid_points(grid, names, interp.pair, max_valuations):
            left, right = rule_values(interp, rule, valuation)
            if not interp.ge(left, right) or (rule.cost and not interp.gt(left, right)):
                status, witness = "VIOLATED", valuation
                break
            if not interp.gt(left, right):
                status = "WEAK"
        rule_verdicts.append(RuleVerdict(rule.id, status, witness))
        if witness is not None:
            logger.info(f"Rule {rule.id} violated at {show_valuation(witness)}")

    mono_verdicts = []
    for name, sym in interp.table.items():
        arity = len(sym.params)
        for position in sorted(interp.mu.get(name, ())):
            mono_verdicts.extend(_check_monotone(interp, name, arity, position, grid, max_valuations))

    report = CheckReport(interp.recipe, grid, rule_verdicts, mono_verdicts)
    logger.info(f"Check {'passed' if report.passed else 'failed'} for {len(rule_verdicts)} rules")
    return report


def _check_monotone(interp: Interpretation, name: str, arity: int, position: int, grid: int, limit: int) -> list:
    names = [f"x{k}" for k in range(1, arity + 1)]
    bumps = [("STRICT", (1, 0)), ("STRICT", (1, 1)), ("WEAK", (0, 1))] if interp.pair else [("STRICT", 1)]
    verdicts = []
    seen_kinds = {}
    for valuation in grid_points(grid, names, interp.pair, limit):
        args = [v for _, v in valuation]
        before = interp.apply(name, args)
        for kind, bump in bumps:
            if seen_kinds.get(kind) is not None:
                continue
            raised = list(args)
            old = raised[position - 1]
            raised[position - 1] = (old[0] + bump[0], old[1] + bump[1]) if interp.pair else old + bump
            after = interp.apply(name, raised)
            ok = interp.gt(after, before) if kind == "STRICT" else interp.ge(after, before)
            if not ok:
                seen_kinds[kind] = valuation
    for kind in dict.fromkeys(k for k, _ in bumps):
        witness = seen_kinds.get(kind)
        verdicts.append(MonoVerdict(name, position, kind, witness is None, witness))
    return verdicts


def derive_usable_map(system: CCTRS) -> dict:
    """
    Least usable replacement map.

    For every rule and every a_i (the right-hand side counting as the last
    one), positions of a_i holding a defined symbol must be active, and so
    must positions of variables that sit at an active position of the
    left-hand side or an earlier condition right-hand side.
    """
    upsilon = {name: set() for name in system.constructors + system.defined}

    def active_vars(t: Term) -> set[str]:
        found, stack = set(), [t]
        while stack:
            u = stack.pop()
            if isinstance(u, Var):
                found.add(u.name)
                continue
            for k, arg in enumerate(u.args, start=1):
                if k in upsilon.get(u.name, ()):
                    stack.append(arg)
        return found

    def activate(t: Term, pos: tuple) -> bool:
        changed = False
        for depth in range(len(pos)):
            above = subterm_at(t, pos[:depth])
            if pos[depth] not in upsilon[above.name]:
                upsilon[above.name].add(pos[depth])
                changed = True
        return changed

    changed = True
    while changed:
        changed = False
        for rule in system.rules:
            sides = [a for a, _ in rule.conditions] + [rule.rhs]
            earlier = [rule.lhs]
            for i, a in enumerate(sides):
                flowing = set().union(*(active_vars(b) for b in earlier))
                for pos, sub in positions(a):
                    needed = (isinstance(sub, App) and system.is_defined(sub.name)) or (
                        isinstance(sub, Var) and sub.name in flowing
                    )
                    if needed and activate(a, pos):
                        changed = True
                if i < len(rule.conditions):
                    earlier.append(rule.conditions[i][1])

    result = {name: frozenset(upsilon[name]) for name in upsilon}
    logger.info("Usable map: " + ", ".join(f"{f}={sorted(v)}" for f, v in result.items()))
    return result


def require_runtime(interp: Interpretation, mode: str):
    if mode == "cdc" and interp.upsilon is not None:
        raise UnsupportedMode(f"Recipe {interp.recipe} with a usable replacement map only bounds runtime complexity")
