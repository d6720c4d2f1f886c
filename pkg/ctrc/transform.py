"""
Transformation of a strong CCTRS into an unconditional context-sensitive TRS.

Every defined symbol f of arity n with m rules is widened to arity n + m; the
extra slots hold `top` while the matching rule may still be tried and `bot`
once it has been ruled out. While the conditions of rule i are evaluated, the
term is rooted by the progress symbol `f#i#j`, whose only active argument is
the condition currently being evaluated.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from loguru import logger

from ctrc.cctrs import CCTRS, ConditionalRule
from ctrc.errors import NotConstructor, NotLinear, NotProper, StrongRequired
from ctrc.terms import BOT, TOP, App, FreshNames, Symbol, SymbolKind, Term, Var, is_linear, render, variables


def progress_name(f: str, i: int, j: int) -> str:
    return f"{f}#{i}#{j}"


def xi(t: Term, star: str, system: CCTRS) -> Term:
    """Pad every defined symbol of t with one `star` flag per rule."""
    if isinstance(t, Var):
        return t
    args = tuple(xi(a, star, system) for a in t.args)
    if system.is_defined(t.name):
        args += (App(star),) * system.m(t.name)
    return App(t.name, args)


def anti_patterns(t: Term, system: CCTRS, fresh: FreshNames | None = None) -> list[Term]:
    """
    Bot-patterns covering every bot-pattern that does not unify with t.

    Args:
        t (Term): linear constructor term.
        system (CCTRS): supplies the signature order.
        fresh (FreshNames): variable supply; every returned pattern gets its own variables.

    Returns:
        list: constructors other than the root first, then defined symbols
        padded with `bot`, then the argument-wise recursion.
    """
    if not system.is_constructor_term(t):
        raise NotConstructor(f"{t} contains a defined symbol")
    if not is_linear(t):
        raise NotLinear(f"{t} is not linear")
    return _anti_patterns(t, system, fresh or FreshNames("v"))


def _anti_patterns(t: Term, system: CCTRS, fresh: FreshNames) -> list[Term]:
    if isinstance(t, Var):
        return []

    def generic(name: str, arity: int, pad: int = 0) -> App:
        return App(name, tuple(Var(fresh()) for _ in range(arity)) + (App(BOT),) * pad)

    found = [generic(name, arity) for name, arity in system.constructor_symbols() if name != t.name]
    found += [generic(name, system.arity[name], system.m(name)) for name in system.defined]
    for j, arg in enumerate(t.args):
        for v in _anti_patterns(arg, system, fresh):
            args = [v if k == j else Var(fresh()) for k in range(len(t.args))]
            found.append(App(t.name, tuple(args)))
    return found


@dataclass(frozen=True)
class TransformedRule:
    id: str
    kind: int
    lhs: App
    rhs: Term
    cost: int
    origin: int  # number of the conditional rule it comes from

    def __str__(self):
        arrow = "->" if self.cost else "->="
        return f"{render(self.lhs)} {arrow} {render(self.rhs)}"


@dataclass(frozen=True)
class TransformedTRS:
    system: CCTRS
    symbols: tuple  # Symbol values in signature order
    mu: dict  # symbol name -> frozenset of active argument positions
    rules: tuple
    ap_mode: str = "full"
    _by_root: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        self._by_root.clear()
        for rule in self.rules:
            self._by_root.setdefault(rule.lhs.name, []).append(rule)

    @property
    def arity(self) -> dict:
        return {s.name: s.arity for s in self.symbols}

    def symbol(self, name: str) -> Symbol:
        return next(s for s in self.symbols if s.name == name)

    def rules_of(self, name: str) -> list[TransformedRule]:
        return self._by_root.get(name, [])

    def with_map(self, upsilon: dict) -> TransformedTRS:
        """μυ: the usable map on symbols of the original signature, μ on progress symbols."""
        mu = dict(self.mu)
        for s in self.symbols:
            if s.kind in (SymbolKind.CONSTRUCTOR, SymbolKind.DEFINED):
                mu[s.name] = frozenset(upsilon.get(s.name, ()))
        return replace(self, mu=mu, _by_root={})


def _rules_for(rule: ConditionalRule, system: CCTRS, ap_mode: str) -> list[TransformedRule]:
    f, i, number = rule.root, rule.index, rule.number
    m = system.m(f)
    avoid = set(variables(rule.lhs)) | set(variables(rule.rhs)) | set(system.arity)
    for a, b in rule.conditions:
        avoid |= set(variables(a)) | set(variables(b))
    slot_names = FreshNames("c", avoid)
    others = {k: Var(slot_names()) for k in range(1, m + 1) if k != i}
    fresh = FreshNames("v", avoid)
    lhs_args = rule.lhs.args

    def slots(middle: list) -> tuple:
        return tuple(others[k] for k in range(1, i)) + tuple(middle) + tuple(others[k] for k in range(i + 1, m + 1))

    def covering(t: Term) -> list[Term]:
        patterns = anti_patterns(t, system, fresh)
        if ap_mode == "var" and patterns:
            return [Var(fresh())]
        return patterns

    def number_of(j: int, n: int) -> str:
        return f"{j}" if ap_mode == "var" else f"{j}.{n}"

    top, bot = App(TOP), App(BOT)
    conds = rule.conditions
    k = len(conds)
    made = []

    if k == 0:
        made.append(TransformedRule(f"1_{number}", 1, App(f, lhs_args + slots([top])), xi(rule.rhs, TOP, system), 1, number))
    else:
        bs = [b for _, b in conds]
        made.append(
            TransformedRule(
                f"2_{number}", 2,
                App(f, lhs_args + slots([top])),
                App(progress_name(f, i, 1), lhs_args + slots([xi(conds[0][0], TOP, system)])),
                0, number,
            )
        )
        made.append(
            TransformedRule(
                f"3_{number}", 3,
                App(progress_name(f, i, k), lhs_args + slots(bs)),
                xi(rule.rhs, TOP, system),
                1, number,
            )
        )
        for j in range(1, k):
            made.append(
                TransformedRule(
                    f"4_{number}.{j}", 4,
                    App(progress_name(f, i, j), lhs_args + slots(bs[:j])),
                    App(progress_name(f, i, j + 1), lhs_args + slots(bs[:j] + [xi(conds[j][0], TOP, system)])),
                    0, number,
                )
            )
        for j in range(1, k + 1):
            for n, v in enumerate(covering(bs[j - 1]), start=1):
                made.append(
                    TransformedRule(
                        f"5_{number}.{number_of(j, n)}", 5,
                        App(progress_name(f, i, j), lhs_args + slots(bs[: j - 1] + [v])),
                        App(f, lhs_args + slots([bot])),
                        0, number,
                    )
                )

    for j, arg in enumerate(lhs_args, start=1):
        for n, v in enumerate(covering(arg), start=1):
            ys = [Var(fresh()) for _ in lhs_args]
            ys[j - 1] = v
            made.append(
                TransformedRule(
                    f"6_{number}.{number_of(j, n)}", 6,
                    App(f, tuple(ys) + slots([top])),
                    App(f, tuple(ys) + slots([bot])),
                    0, number,
                )
            )
    return made


def transform(system: CCTRS, ap_mode: str = "full") -> TransformedTRS:
    """
    Build the context-sensitive TRS of a strong CCTRS.

    Rules come in conditional-rule order; per rule: the direct rule or the
    condition chain (start, finish, advance, abort), then the rules that
    retire it on mismatching arguments.
    """
    if not system.strong:
        raise StrongRequired("The transformation needs a strong CCTRS (validate with --strong)")
    if ap_mode not in ("full", "var"):
        raise ValueError(f"Unknown anti-pattern mode {ap_mode}")

    symbols, mu = [], {}
    for name in system.constructors:
        n = system.arity[name]
        symbols.append(Symbol(name, n, SymbolKind.CONSTRUCTOR))
        mu[name] = frozenset(range(1, n + 1))
    for name in system.defined:
        n = system.arity[name]
        symbols.append(Symbol(name, n + system.m(name), SymbolKind.DEFINED))
        mu[name] = frozenset(range(1, n + 1))
    for rule in system.rules:
        n, m = system.arity[rule.root], system.m(rule.root)
        for j in range(1, len(rule.conditions) + 1):
            name = progress_name(rule.root, rule.index, j)
            symbols.append(Symbol(name, n + m + j - 1, SymbolKind.PROGRESS, (rule.root, rule.index, j)))
            mu[name] = frozenset({n + rule.index + j - 1})
    for name in (TOP, BOT):
        symbols.append(Symbol(name, 0, SymbolKind.AUXILIARY))
        mu[name] = frozenset()

    rules = []
    for rule in system.rules:
        rules.extend(_rules_for(rule, system, ap_mode))
    rules.sort(key=lambda r: (r.origin, r.kind))

    logger.info(f"Transformed {len(system.rules)} conditional rules into {len(rules)} rules ({sum(r.cost for r in rules)} with cost 1)")
    return TransformedTRS(system, tuple(symbols), mu, tuple(rules), ap_mode)


def to_tpdb(trs: TransformedTRS, strategy: str = "cs") -> str:
    """TPDB text; administrative rules are relative (`->=`)."""
    seen: dict[str, None] = {}
    for rule in trs.rules:
        for x in variables(rule.lhs) + variables(rule.rhs):
            seen.setdefault(x)

    lines = [f"(VAR {' '.join(seen)})"]
    match strategy:
        case "cs":
            lines.append("(STRATEGY CONTEXTSENSITIVE")
            for s in trs.symbols:
                active = " ".join(str(p) for p in sorted(trs.mu[s.name]))
                lines.append(f"  ({s.name}{' ' + active if active else ''})")
            lines.append(")")
        case "plain":
            pass
        case _:
            raise ValueError(f"Unknown strategy {strategy}")
    lines.append("(RULES")
    lines.extend(f"  {rule}" for rule in trs.rules)
    lines.append(")")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class HTermClass:
    proper: bool
    bot_pattern: bool
    top_term: bool


def _flags(t: App, system: CCTRS) -> tuple:
    return t.args[system.arity[t.name]:]


def _is_flag(t: Term) -> bool:
    return isinstance(t, App) and t.name in (TOP, BOT) and not t.args


def is_proper(t: Term, system: CCTRS) -> bool:
    if isinstance(t, Var):
        return True
    if t.name not in system.arity:
        return False
    n = system.arity[t.name]
    if system.is_defined(t.name):
        if len(t.args) != n + system.m(t.name) or not all(_is_flag(c) for c in _flags(t, system)):
            return False
    elif len(t.args) != n:
        return False
    return all(is_proper(a, system) for a in t.args[:n])


def _uniform(t: Term, star: str, system: CCTRS) -> bool:
    if isinstance(t, Var):
        return True
    n = system.arity[t.name]
    if system.is_defined(t.name) and any(c.name != star for c in _flags(t, system)):
        return False
    return all(_uniform(a, star, system) for a in t.args[:n])


def classify_hterm(t: Term, system: CCTRS) -> HTermClass:
    if not is_proper(t, system):
        return HTermClass(False, False, False)
    return HTermClass(
        proper=True,
        bot_pattern=_uniform(t, BOT, system) and is_linear(t),
        top_term=_uniform(t, TOP, system),
    )


def zeta(t: Term, system: CCTRS) -> Term:
    """Labeled term to transformed term: slot k is `top` exactly when rule k is still in the label."""
    if isinstance(t, Var):
        return t
    args = tuple(zeta(a, system) for a in t.args)
    if system.is_defined(t.name):
        rules = t.label if t.label is not None else frozenset(range(1, system.m(t.name) + 1))
        args += tuple(App(TOP if k in rules else BOT) for k in range(1, system.m(t.name) + 1))
    return App(t.name, args)


def zeta_inv(t: Term, system: CCTRS) -> Term:
    if not is_proper(t, system):
        raise NotProper(f"{render(t)} is not a proper term")
    return _zeta_inv(t, system)


def _zeta_inv(t: Term, system: CCTRS) -> Term:
    if isinstance(t, Var):
        return t
    n = system.arity[t.name]
    args = tuple(_zeta_inv(a, system) for a in t.args[:n])
    if not system.is_defined(t.name):
        return App(t.name, args)
    rules = frozenset(k for k, c in enumerate(_flags(t, system), start=1) if c.name == TOP)
    return App(t.name, args, rules)
