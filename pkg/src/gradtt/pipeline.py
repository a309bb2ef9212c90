"""End-to-end operations shared by the command line and the harness."""

from __future__ import annotations

from dataclasses import dataclass

from .config import Config
from .extract import erase, target_read_numeral
from .grades import zeros
from .reduce import Numeral, Readback, Timeout, read_numeral
from .syntax import Term
from .typecheck import EMPTY, Checker, Ctx
from .usage import ONE_M, check_usage


def check_closed(config: Config, t: Term, ty: Term | None = None, ctx: Ctx = EMPTY,
                 gamma: tuple[str, ...] | None = None) -> Term:
    """Type-check ``t`` (against ``ty`` if given) and check ``γ ▸ t``.

    ``γ`` defaults to the all-zero context.  Returns the type.  Raises
    :class:`~gradtt.typecheck.TypingError` or :class:`~gradtt.usage.UsageError`.
    """
    checker = Checker(config)
    checker.check_ctx(ctx)
    if ty is None:
        ty = checker.infer(ctx, t)
    else:
        checker.check_type(ctx, ty)
        checker.check(ctx, t, ty)
    check_usage(config, gamma if gamma is not None else zeros(config.modality, len(ctx)), t, ONE_M)
    return ty


@dataclass(frozen=True)
class RunResult:
    source: Readback
    cbn: Readback
    cbv: Readback

    @property
    def agree(self) -> bool:
        """All three sides produced the same numeral."""
        return (isinstance(self.source, Numeral) and isinstance(self.cbn, Numeral)
                and isinstance(self.cbv, Numeral)
                and self.source.value == self.cbn.value == self.cbv.value)

    def render(self) -> str:
        verdict = "AGREE" if self.agree else "DISAGREE"
        return (f"source={show_readback(self.source)} target(cbn)={show_readback(self.cbn)} "
                f"target(cbv)={show_readback(self.cbv)} {verdict}")


def show_readback(r: Readback) -> str:
    match r:
        case Numeral(v):
            return str(v)
        case Timeout():
            return "timeout"
    return "stuck"


def run(config: Config, t: Term) -> RunResult:
    """Evaluate ``t`` in the source and its extraction under both strategies."""
    zero = config.modality.zero
    fuel = config.fuel
    src = read_numeral(t, fuel)
    cbn = target_read_numeral(erase(t, strict=False, moded=config.moded, zero=zero), False, fuel)
    cbv = target_read_numeral(erase(t, strict=True, moded=config.moded, zero=zero), True, fuel)
    return RunResult(src, cbn, cbv)
