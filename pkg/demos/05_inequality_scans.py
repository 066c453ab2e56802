"""Brute-force sign scans of the polynomial inequalities.

Every invariance proof in this corner of the subject reduces to "some
cubic is nonnegative on some cone".  The cubics are homogeneous, so it
is enough to scan the sup-norm unit slice of each region on a grid; the
trace bound gets a separate high-volume random mode with isotropic
states injected to pin the equality case.

Kinds:
  j-neg-trace     cubic J on {trace <= 0, mu+nu < 0},        rho < 0
  j-nonneg-trace  J - rho/(1-2 rho) (mu+nu)^3 on {trace >= 0}, rho < 0
  i-poly          cubic I on {nu < 0},                     0 <= rho < 1/4
  xi-prime        xi-rate numerator on {mu+nu >= 0, nu < 0}, theta=-1/(2 rho)
  trace-bound     trace' >= (4/3)(1-3 rho) trace^2, everywhere
"""

from pinchlab import FlowParams, InequalityKind, scan_inequality

print("== 1. grid scans at resolution 200")
cases = (
    (InequalityKind.J_NEG_TRACE, FlowParams(rho=-1.0)),
    (InequalityKind.J_NONNEG_TRACE, FlowParams(rho=-1.0)),
    (InequalityKind.I_POLY, FlowParams(rho=0.1)),
    (InequalityKind.XI_PRIME, FlowParams(rho=-0.5, eta=1.0, theta=1.0)),
    (InequalityKind.TRACE_BOUND, FlowParams(rho=-1.0)),
)
for kind, params in cases:
    rep = scan_inequality(kind, params, resolution=200)
    print(f"   {kind.value:15s} rho={params.rho:+.1f}: "
          f"{rep.points_checked:6d} points, {rep.violations} violations, "
          f"min margin {rep.min_margin:.3e} at "
          f"({rep.argmin_state.lam:+.3f}, {rep.argmin_state.mu:+.3f}, "
          f"{rep.argmin_state.nu:+.3f})")

print()
print("== 2. where the bound is tight, the argmin says so")
rep = scan_inequality(InequalityKind.J_NONNEG_TRACE, FlowParams(rho=-1.0), resolution=200)
print(f"   j-nonneg-trace minimum {rep.min_margin:.3e} sits at mu+nu -> 0^- "
      f"(state {rep.argmin_state.as_tuple()})")
print(f"   near-boundary points flagged: {rep.near_boundary_points}")

print()
print("== 3. the trace bound at volume: one million random states")
rep = scan_inequality(
    InequalityKind.TRACE_BOUND, FlowParams(rho=0.2), samples=1_000_000, seed=0
)
print(f"   mode={rep.mode}, violations={rep.violations}, "
      f"min margin {rep.min_margin:.3e}")
print(f"   injected isotropic states hit equality to "
      f"{rep.injected_max_abs_margin:.1e} (exact cancellation)")
