"""Command-line surface: sweeps, simulations and dispersion solves with CSV
artifacts and one-line summaries.

Commands: stability-map, cfl-map, amp-cfl-check, simulate, iterate,
dispersion, oracle-check.  Exit codes: 0 success, 1 solver/certification
failure, 2 usage error.
"""

import math
import sys
from dataclasses import dataclass, field

import numpy as np

__all__ = ["RunConfig", "UsageError", "parse_config", "run", "main"]

USAGE = """\
usage: ampfsi COMMAND [--config FILE] [--KEY VALUE ...]

commands:
  stability-map   --scheme amp|tp|atp --ly GRID --mgrid GRID --out CSV [--threads N] [--amax X]
  cfl-map         --lx GRID --ly GRID --out CSV [--nomega N]
  amp-cfl-check   --lx X --ly Y [--msamples GRID] [--out CSV]
  simulate        --scheme amp|tp|atp|tp-iter --ly X --mgrid X --steps N
                  [--lx X] [--omega W (tp-iter only)] [--depth N] [--out CSV]
  iterate         --m0 GRID [--omega W] [--tau T] [--out CSV]
  dispersion      PROBLEM --delta D [--n N] [--seed-re X --seed-im Y] [--out CSV]
                  (PROBLEM: rotating-disk | traveling-wave)
  oracle-check

GRID syntax: lo:hi:count[:log] or a single number.
Config files hold 'key = value' lines with # comments; flags override them.
"""

_COMMANDS = {
    "stability-map": {"required": {"scheme", "ly", "mgrid", "out"},
                      "optional": {"threads", "amax"}},
    "cfl-map": {"required": {"lx", "ly", "out"}, "optional": {"nomega"}},
    "amp-cfl-check": {"required": {"lx", "ly"}, "optional": {"msamples", "out"}},
    "simulate": {"required": {"scheme", "ly", "mgrid", "steps"},
                 "optional": {"lx", "omega", "depth", "out"}},
    "iterate": {"required": {"m0"}, "optional": {"omega", "tau", "out"}},
    "dispersion": {"required": {"problem", "delta"},
                   "optional": {"n", "seed-re", "seed-im", "out"}},
    "oracle-check": {"required": set(), "optional": {"out"}},
}


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)

    def grid(self, key, default=None):
        raw = self.params.get(key, default)
        if raw is None:
            return None
        return parse_grid(raw, key)

    def num(self, key, default=None):
        raw = self.params.get(key, default)
        if raw is None:
            return None
        try:
            return float(raw)
        except (TypeError, ValueError):
            raise UsageError(f"malformed number for --{key}: {raw!r}")

    def integer(self, key, default=None):
        raw = self.params.get(key, default)
        if raw is None:
            return None
        try:
            return int(raw)
        except (TypeError, ValueError):
            raise UsageError(f"malformed integer for --{key}: {raw!r}")


def parse_grid(spec, key="grid"):
    """lo:hi:count[:log] -> ndarray; a bare number gives a length-1 grid."""
    if isinstance(spec, (int, float)):
        return np.array([float(spec)])
    parts = str(spec).split(":")
    try:
        if len(parts) == 1:
            return np.array([float(parts[0])])
        if len(parts) == 3:
            lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
            return np.linspace(lo, hi, count)
        if len(parts) == 4 and parts[3] == "log":
            lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
            if lo <= 0 or hi <= 0:
                raise UsageError(f"log grid for --{key} needs positive bounds")
            return np.geomspace(lo, hi, count)
    except UsageError:
        raise
    except ValueError:
        pass
    raise UsageError(f"malformed grid for --{key}: {spec!r} "
                     "(expected lo:hi:count[:log])")


def _read_config_file(path):
    values = {}
    try:
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise UsageError(
                        f"{path}:{lineno}: expected 'key = value', got {line!r}")
                key, value = line.split("=", 1)
                values[key.strip()] = value.strip()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}")
    return values


def parse_config(argv, config_file=None):
    """Parse argv (plus an optional config file) into a RunConfig.

    Flags override file values; unknown commands and keys are rejected with
    the offending name.
    """
    argv = list(argv)
    if not argv:
        raise UsageError(USAGE)
    command = None
    flags = {}
    pos = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok.startswith("--"):
            key = tok[2:]
            if i + 1 >= len(argv):
                raise UsageError(f"flag --{key} needs a value")
            flags[key] = argv[i + 1]
            i += 2
        else:
            pos.append(tok)
            i += 1
    file_vals = {}
    cfg_path = flags.pop("config", config_file)
    if cfg_path:
        file_vals = _read_config_file(cfg_path)
    if pos:
        command = pos[0]
        pos = pos[1:]
    else:
        command = file_vals.pop("command", None)
    if command is None:
        raise UsageError(USAGE)
    if command not in _COMMANDS:
        raise UsageError(f"unknown command {command!r}")
    params = dict(file_vals)
    params.pop("command", None)
    params.update(flags)
    if command == "dispersion" and pos:
        params.setdefault("problem", pos[0])
        pos = pos[1:]
    if pos:
        raise UsageError(f"unexpected positional arguments: {pos}")
    known = _COMMANDS[command]["required"] | _COMMANDS[command]["optional"]
    for key in params:
        if key not in known:
            raise UsageError(f"unknown key --{key} for command {command}")
    missing = _COMMANDS[command]["required"] - set(params)
    if missing:
        raise UsageError(f"missing required keys for {command}: "
                         + ", ".join(sorted(missing)))
    _validate(command, params)
    return RunConfig(command=command, params=params)


def _validate(command, params):
    scheme = params.get("scheme")
    if scheme is not None and scheme not in ("amp", "tp", "atp", "tp-iter"):
        raise UsageError(f"unknown scheme {scheme!r}")
    if command == "simulate" and "omega" in params and scheme != "tp-iter":
        raise UsageError(
            f"--omega only applies to --scheme tp-iter (got --scheme {scheme})")
    if command == "dispersion":
        prob = params.get("problem")
        if prob not in ("rotating-disk", "traveling-wave"):
            raise UsageError(f"unknown dispersion problem {prob!r}")
        if prob == "rotating-disk" and "n" in params:
            raise UsageError("--n only applies to traveling-wave")


def _config_echo(config):
    keys = sorted(config.params)
    body = " ".join(f"{k}={config.params[k]}" for k in keys)
    return f"# config: command={config.command} {body}"


def _write_csv(path, config, header, rows):
    with open(path, "w") as fh:
        fh.write(_config_echo(config) + "\n")
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def _fmt(x):
    return f"{x:.12e}"


# ---------------------------------------------------------------------------
# command implementations
# ---------------------------------------------------------------------------

def _run_stability_map(config):
    from .stability import stability_map

    scheme = config.params["scheme"]
    if scheme == "tp-iter":
        raise UsageError("stability-map analyzes amp, tp or atp")
    lys = config.grid("ly")
    mgs = config.grid("mgrid")
    amax = config.num("amax")
    threads = config.integer("threads")
    rmap = stability_map(scheme, lys, mgs, a_max=amax, workers=threads)
    rows = []
    for i, ly in enumerate(rmap.axis1):
        for j, mg in enumerate(rmap.axis2):
            val = rmap.values[i, j]
            rows.append([
                _fmt(ly), _fmt(mg),
                _fmt(val) if math.isfinite(val) else "nan",
                str(int(rmap.nroots[i, j])), rmap.status[i, j],
            ])
    _write_csv(config.params["out"], config, "lambda_y,mgrid,max_abs_A,nroots,status", rows)
    finite = rmap.values[np.isfinite(rmap.values)]
    failures = int(np.sum(rmap.status == "failed"))
    print(f"stability-map[{scheme}]: cells={rmap.values.size} "
          f"max|A|={np.max(finite):.6f} failures={failures} "
          f"-> {config.params['out']}")
    return 1 if failures else 0


def _run_cfl_map(config):
    from .stability import cauchy_cfl_map

    lxs = config.grid("lx")
    lys = config.grid("ly")
    nomega = config.integer("nomega", 256)
    rmap = cauchy_cfl_map(lxs, lys, n_omega=nomega)
    rows = []
    for i, lx in enumerate(rmap.axis1):
        for j, ly in enumerate(rmap.axis2):
            rows.append([_fmt(lx), _fmt(ly), _fmt(rmap.values[i, j])])
    _write_csv(config.params["out"], config, "lambda_x,lambda_y,max_abs_A", rows)
    print(f"cfl-map: cells={rmap.values.size} max|A|={np.max(rmap.values):.6f} "
          f"-> {config.params['out']}")
    return 0


def _run_amp_cfl_check(config):
    from .stability import amp_cfl_check

    lx = config.num("lx")
    ly = config.num("ly")
    msamples = config.grid("msamples", "1e-6:1e6:25:log")
    worst = amp_cfl_check(lx, ly, msamples)
    verdict = "stable" if worst <= 1.0 + 1e-9 else "unstable"
    print(f"max|A| = {worst:.6f} ({verdict})")
    if config.params.get("out"):
        _write_csv(config.params["out"], config, "lambda_x,lambda_y,max_abs_A",
                   [[_fmt(lx), _fmt(ly), _fmt(worst)]])
    return 0


def _bump_lattice(depth):
    from .solid import SolidLattice

    lat = SolidLattice(depth)
    j = np.arange(depth + 2, dtype=float)
    bump = np.exp(-0.25 * (j - 6.0) ** 2)
    lat.a += bump * (1.0 + 0.3j)
    lat.b += bump * (0.8 - 0.2j)
    return lat


def _run_simulate(config):
    from .coupling import Scheme, advance
    from .solid import ModeParams

    scheme_name = config.params["scheme"]
    ly = config.num("ly")
    mgrid = config.num("mgrid")
    lx = config.num("lx", 0.0)
    steps = config.integer("steps")
    depth = config.integer("depth") or max(64, int(math.ceil(steps * ly)) + 16)
    if scheme_name == "tp-iter":
        omega = config.num("omega")
        if omega is None:
            from .stability import tp_iteration_optimum

            omega = tp_iteration_optimum(mgrid / ly)[0]
        scheme = Scheme.tp_iterated(omega)
    else:
        scheme = Scheme(kind=scheme_name)
    p = ModeParams.from_dimensionless(ly, mgrid, lambda_x=lx)
    lat = _bump_lattice(depth)
    result = advance(scheme, p, lat, nsteps=steps)
    if config.params.get("out"):
        rows = []
        for k in range(len(result.norms)):
            logn = math.log(result.norms[k]) if result.norms[k] > 0 else -math.inf
            rows.append([
                str(k), _fmt(logn),
                _fmt(result.v_trace[k].real), _fmt(result.v_trace[k].imag),
                _fmt(result.p_trace[k].real), _fmt(result.p_trace[k].imag),
            ])
        _write_csv(config.params["out"], config,
                   "step,log_norm,v_I_re,v_I_im,p_I_re,p_I_im", rows)
    print(f"simulate[{scheme_name}]: ly={ly} mgrid={mgrid} lx={lx} steps={steps} "
          f"growth={result.growth:.6f} fit_residual={result.residual:.2e} "
          f"status={result.status}")
    return 0


def _run_iterate(config):
    from .coupling import InterfaceHistory, Scheme, tp_iterate
    from .solid import ModeParams, SolidLattice
    from .stability import tp_iteration_optimum

    m0s = config.grid("m0")
    tau = config.num("tau", 1e-6)
    rows = []
    for m0 in m0s:
        omega = config.num("omega") or tp_iteration_optimum(m0)[0]
        ly = 0.5
        p = ModeParams.from_dimensionless(ly, m0 * ly)
        lat = SolidLattice(32)
        lat.a[1] = 0.7 - 0.1j
        lat.b[1] = 1.3 + 0.4j
        hist = InterfaceHistory.seeded(lat, p)
        hist.v_n *= 0.9   # perturb so the first correction is nonzero
        res = tp_iterate(lat, hist, p, omega, max_iters=10000, tol=tau)
        k = len(res.iterates) - 1
        settled = res.ratios[1:] if len(res.ratios) > 1 else res.ratios
        ratio = np.mean([r.real for r in settled]) if settled else 0.0
        rows.append([_fmt(m0), _fmt(omega), str(k), _fmt(ratio)])
        state = "diverged" if res.diverged else "converged"
        print(f"iterate: M0={m0:g} omega={omega:.6g} k={k} ratio={ratio:.6g} ({state})")
    if config.params.get("out"):
        _write_csv(config.params["out"], config, "M0,omega,k,ratio", rows)
    return 0


def _run_dispersion(config):
    from .oracles import (
        RotatingDiskProblem,
        TravelingWaveProblem,
        default_seed,
        grid_scan_seed,
        mode_csv_row,
        rotating_disk_residual,
        rotating_disk_solve,
        traveling_wave_det,
        traveling_wave_solve,
    )

    problem = config.params["problem"]
    delta = config.num("delta")
    seed_re = config.num("seed-re")
    seed_im = config.num("seed-im")
    seed = complex(seed_re, seed_im) if seed_re is not None else None
    if problem == "rotating-disk":
        prob = RotatingDiskProblem(r0=0.5, R=1.0, rho=1.0, nu=0.1,
                                   mubar=delta, rhobar=delta, u0bar=1.0)
        if seed is None:
            seed = default_seed(problem, delta) or grid_scan_seed(
                lambda w: rotating_disk_residual(prob, w))
        mode = rotating_disk_solve(prob, seed)
        n = 0
    else:
        n = config.integer("n", 3)
        prob = TravelingWaveProblem(n=n, r0=1.0, R=1.2, rho=1.0, nu=0.1,
                                    mubar=delta, lambdabar=delta,
                                    rhobar=delta, u0bar=1e-7)
        if seed is None:
            seed = default_seed(problem, delta, n) or grid_scan_seed(
                lambda w: traveling_wave_det(prob, w),
                re_range=(0.5, 8.0), im_range=(-4.0, 0.0))
        mode = traveling_wave_solve(prob, seed)
    row = mode_csv_row(problem, n, delta, mode)
    if config.params.get("out"):
        header = "problem,n,delta,omega_re,omega_im,residual,constants..."
        _write_csv(config.params["out"], config, header, [row.split(",")])
    print(f"dispersion[{problem}]: delta={delta:g} n={n} "
          f"omega={mode.omega.real:.6g}{mode.omega.imag:+.6g}i "
          f"residual={mode.max_residual:.2e}")
    return 0 if mode.max_residual <= 1e-8 else 1


def _run_oracle_check(config):
    import numpy as np

    from .oracles import (
        PistonParams,
        RotatingDiskProblem,
        TravelingWaveProblem,
        piston_fluid,
        piston_interface,
        rotating_disk_solve,
        smooth_ramp,
        traveling_wave_solve,
    )

    failures = 0

    def report(name, ok, detail):
        nonlocal failures
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
        failures += 0 if ok else 1

    piston = PistonParams(beta=0.05, omega=math.pi, r0=0.5, R=1.0, rho=1.0,
                          lambdabar=1.0, mubar=1.0, rhobar=1.0)
    worst = 0.0
    for t in np.linspace(0.0, 2.0, 9):
        r_i, _ = piston_interface(piston, t)
        h = 0.02   # r v_r constant in r: truncation-free at any step
        for r in np.linspace(r_i + 0.07, 0.93, 5):
            vp = piston_fluid(piston, r + h, t)[0]
            vm = piston_fluid(piston, r - h, t)[0]
            div = (((r + h) * vp - (r - h) * vm) / (2 * h)) / r
            worst = max(worst, abs(div))
    report("piston divergence", worst <= 1e-13, f"max |div| = {worst:.2e}")

    disk = RotatingDiskProblem(r0=0.5, R=1.0, rho=1.0, nu=0.1, mubar=1.0,
                               rhobar=1.0, u0bar=1.0)
    mode = rotating_disk_solve(disk, 8.7 + 0.8j)
    ok = abs(mode.omega - (8.778 + 0.7854j)) / abs(mode.omega) < 5e-4
    report("rotating-disk frequency", ok and mode.max_residual < 1e-8,
           f"omega = {mode.omega:.6g}, residual = {mode.max_residual:.2e}")

    wave = TravelingWaveProblem(n=3, r0=1.0, R=1.2, rho=1.0, nu=0.1, mubar=1.0,
                                lambdabar=1.0, rhobar=1.0, u0bar=1e-7)
    wmode = traveling_wave_solve(wave, 3.5 - 1.1j)
    ok = abs(wmode.omega - (3.491 - 1.154j)) / abs(wmode.omega) < 5e-4
    report("traveling-wave frequency", ok and wmode.max_residual < 1e-8,
           f"omega = {wmode.omega:.6g}, residual = {wmode.max_residual:.2e}")

    ramp_ok = smooth_ramp(0.0) == 0.0 and smooth_ramp(1.0) == 1.0 \
        and abs(smooth_ramp(0.5) - 0.5) < 1e-15
    report("smooth ramp", ramp_ok, "endpoints and midpoint")
    return 1 if failures else 0


_RUNNERS = {
    "stability-map": _run_stability_map,
    "cfl-map": _run_cfl_map,
    "amp-cfl-check": _run_amp_cfl_check,
    "simulate": _run_simulate,
    "iterate": _run_iterate,
    "dispersion": _run_dispersion,
    "oracle-check": _run_oracle_check,
}


def run(config: RunConfig) -> int:
    """Dispatch a parsed configuration; returns the process exit code."""
    try:
        return _RUNNERS[config.command](config)
    except UsageError:
        raise
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = parse_config(argv)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    try:
        return run(config)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
