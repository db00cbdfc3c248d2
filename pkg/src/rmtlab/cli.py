"""Command-line front end.

Subcommands:

  simulate    sample ensemble spectra to CSV
  pastur      solve a theoretical density to CSV
  analyze     correlation pipeline for a prices/returns CSV
  fluct       number-variance curve from simulated spectra
  powermap    power-map moment report as JSON
  portfolio   minimal-variance study CSV + summary JSON
  replay      re-run any command from its manifest

Every run writes a <command>_manifest.json next to its outputs capturing
the fully resolved configuration; `replay` re-executes a manifest and
reproduces the primary outputs bit for bit for a fixed seed. Options can
also come from an INI-style config file (one section per subcommand);
explicit flags override file values. The default output directory is
taken from the RMTLAB_OUTDIR environment variable when set.

All outputs are machine-readable CSV/JSON; schemas are documented in
docs/formats.md. Unconverged solver points are flagged in-band (the
converged column), so a run that produced flagged points still exits 0;
only usage and domain errors exit nonzero.
"""

from __future__ import annotations

import argparse
import configparser
import json
import os
import sys
import warnings

import numpy as np

from . import __version__, compare, ensembles, fluctuations, models
from . import panel as panel_mod
from . import pastur as pastur_mod
from . import portfolio as portfolio_mod
from . import powermap as powermap_mod
from .errors import BadParameters, RmtlabError

OUTDIR_ENV = "RMTLAB_OUTDIR"

SPECTRA_CSV = "spectra.csv"
SPECTRA_META_JSON = "spectra_meta.json"
DENSITY_CSV = "density.csv"
DENSITY_NULL_CSV = "density_zeta0.csv"
OVERLAY_JSON = "overlay_report.json"
FLUCT_CSV = "number_variance.csv"
POWERMAP_JSON = "powermap_report.json"
STUDY_CSV = "portfolio_study.csv"
STUDY_JSON = "portfolio_summary.json"
CORRELATION_CSV = "correlation.csv"
SPECTRUM_CSV = "spectrum.csv"
ANALYZE_JSON = "analysis_report.json"
DENOISED_CSV = "denoised.csv"


# ---------------------------------------------------------------- tokens

def _kv_args(body, token):
    out = {}
    for part in body.split(","):
        if "=" not in part:
            raise BadParameters(f"bad model token {token!r}: expected k=v")
        k, v = part.split("=", 1)
        out[k.strip()] = float(v)
    return out


def parse_model(token, n, m=None):
    """Build a correlation model from a CLI token.

    Named forms: identity | equal-cross:c=V | exponential:c=V |
    rank-one:a=V,b=V,c=V | banded:a=V,b=V,c=V. Presets fig1/fig2/fig3
    name the example studies (exponential c=0.9; rank-one a=b=0.9,
    c=0.8; banded a=b=0.5, c=0.05). Partitioned forms need both n and m.
    """
    if token is None or token == "identity":
        return models.identity(n)
    name, _, body = token.partition(":")
    if name == "fig1":
        return models.exponential(n, 0.9)
    if name in ("fig2", "fig3", "rank-one", "banded"):
        if m is None:
            raise BadParameters(f"model {name!r} needs both -n and -m")
        if name == "fig2":
            return models.rank_one_partitioned(n, m, 0.9, 0.9, 0.8)
        if name == "fig3":
            return models.banded_partitioned(n, m, 0.5, 0.5, 0.05)
        kv = _kv_args(body, token)
        ctor = (models.rank_one_partitioned if name == "rank-one"
                else models.banded_partitioned)
        return ctor(n, m, kv["a"], kv["b"], kv["c"])
    if name == "equal-cross":
        return models.equal_cross(n, _kv_args(body, token)["c"])
    if name == "exponential":
        return models.exponential(n, _kv_args(body, token)["c"])
    raise BadParameters(f"unknown model token {token!r}")


def _parse_range(token, what, cast=float):
    parts = token.split(":")
    if len(parts) != 2:
        raise BadParameters(f"{what} must look like lo:hi, got {token!r}")
    lo, hi = cast(parts[0]), cast(parts[1])
    if not hi > lo:
        raise BadParameters(f"{what} needs hi > lo, got {token!r}")
    return lo, hi


def _parse_grid(token):
    parts = token.split(":")
    if len(parts) != 3:
        raise BadParameters(f"grid must look like lo:hi:points, got {token!r}")
    lo, hi, pts = float(parts[0]), float(parts[1]), int(parts[2])
    if not (hi > lo and pts >= 2):
        raise BadParameters(f"bad grid token {token!r}")
    return np.linspace(lo, hi, pts)


def _parse_sweep(token):
    """Inclusive integer sweep lo:hi:step."""
    parts = token.split(":")
    if len(parts) != 3:
        raise BadParameters(f"sweep must look like lo:hi:step, got {token!r}")
    lo, hi, step = (int(p) for p in parts)
    if step < 1 or hi < lo:
        raise BadParameters(f"bad sweep token {token!r}")
    return list(range(lo, hi + 1, step))


def _parse_qlist(token):
    return [float(p) for p in token.split(",")]


# ------------------------------------------------------------- file I/O

def _write_json(path, payload):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_spectra_csv(path, results):
    with open(path, "w") as fh:
        fh.write("member,index,eigenvalue\n")
        for res in results:
            for i, v in enumerate(res.eigenvalues):
                fh.write("%d,%d,%r\n" % (res.member, i, float(v)))


def _read_spectra_csv(path):
    members = {}
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "member,index,eigenvalue":
            raise BadParameters(f"{path} is not a spectra CSV")
        for line in fh:
            m, _, v = line.rstrip("\n").split(",")
            members.setdefault(int(m), []).append(float(v))
    return {m: np.sort(np.array(v)) for m, v in members.items()}


def _write_density_csv(path, sol):
    with open(path, "w") as fh:
        fh.write("lambda,rho,pv,converged,residual\n")
        for i in range(sol.grid.size):
            fh.write("%r,%r,%r,%s,%r\n"
                     % (float(sol.grid[i]), float(sol.rho[i]),
                        float(sol.pv[i]),
                        "true" if sol.converged[i] else "false",
                        float(sol.residual[i])))


def _read_density_csv(path):
    lam, rho, pv = [], [], []
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "lambda,rho,pv,converged,residual":
            raise BadParameters(f"{path} is not a density CSV")
        for line in fh:
            cells = line.rstrip("\n").split(",")
            lam.append(float(cells[0]))
            rho.append(float(cells[1]))
            pv.append(float(cells[2]))
    return np.array(lam), np.array(rho), np.array(pv)


def _write_matrix_csv(path, matrix, labels):
    with open(path, "w") as fh:
        fh.write(",".join(str(x) for x in labels) + "\n")
        for row in matrix:
            fh.write(",".join(repr(float(x)) for x in row) + "\n")


# -------------------------------------------------- config resolution

class _Opt:
    def __init__(self, name, cast, default, help, flag=False, required=False,
                 short=None, choices=None):
        self.name = name
        self.cast = cast
        self.default = default
        self.help = help
        self.flag = flag
        self.required = required
        self.short = short
        self.choices = choices


_OPTIONS = {
    "simulate": [
        _Opt("kind", str, None, "ensemble kind", required=True,
             choices=["woe", "cwoe", "two-channel"]),
        _Opt("n", int, None, "matrix dimension N", required=True, short="-n"),
        _Opt("t", int, None, "horizon T", short="-t"),
        _Opt("kappa", float, None, "T/N (alternative to -t)"),
        _Opt("m", int, None, "second channel dimension M", short="-m"),
        _Opt("members", int, 1, "ensemble members"),
        _Opt("sigma", float, 1.0, "entry scale"),
        _Opt("model", str, None, "correlation model token"),
        _Opt("seed", int, 0, "master seed"),
        _Opt("workers", int, 1, "worker threads"),
    ],
    "pastur": [
        _Opt("mp", bool, False, "closed-form null density", flag=True),
        _Opt("cwoe", bool, False, "one-channel solver", flag=True),
        _Opt("two_channel", bool, False, "two-channel solver", flag=True),
        _Opt("kappa", float, None, "T/N for mp/cwoe"),
        _Opt("sigma", float, 1.0, "entry scale"),
        _Opt("n", int, None, "model dimension for --cwoe", short="-n"),
        _Opt("m", int, None, "second dimension for --zeta-from", short="-m"),
        _Opt("model", str, None, "model token for --cwoe"),
        _Opt("zeta_from", str, None, "partitioned model token for ζ"),
        _Opt("kn", float, None, "N/T for --two-channel"),
        _Opt("km", float, None, "M/T for --two-channel"),
        _Opt("grid", str, None, "lo:hi:points evaluation grid"),
        _Opt("epsilon", float, None, "imaginary offset"),
        _Opt("overlay", str, None, "spectra CSV to compare against"),
        _Opt("bins", int, 50, "overlay histogram bins"),
    ],
    "analyze": [
        _Opt("csv", str, None, "input CSV path", required=True),
        _Opt("returns", bool, False, "input already holds returns",
             flag=True),
        _Opt("transpose", bool, False, "rows are variables", flag=True),
        _Opt("index_column", bool, False, "skip first column", flag=True),
        _Opt("lag", int, 0, "time lag"),
        _Opt("powermap", float, None, "denoise with exponent q"),
    ],
    "fluct": [
        _Opt("spectra", str, None, "spectra CSV from simulate",
             required=True),
        _Opt("density", str, None, "density CSV from pastur",
             required=True),
        _Opt("window", str, None, "lo:hi eigenvalue window"),
        _Opt("r_max", int, 20, "largest interval length"),
    ],
    "powermap": [
        _Opt("n", int, None, "matrix dimension N", required=True, short="-n"),
        _Opt("t", int, None, "horizon T", required=True, short="-t"),
        _Opt("alpha", float, 1e-3, "map exponent minus one"),
        _Opt("members", int, 10, "ensemble members"),
        _Opt("model", str, None, "identity or equal-cross:c=V"),
        _Opt("seed", int, 0, "master seed"),
    ],
    "portfolio": [
        _Opt("n", int, 100, "number of assets", short="-n"),
        _Opt("block_size", int, 20, "assets per block"),
        _Opt("rho_in", float, 0.6, "intra-block correlation"),
        _Opt("rho_out", float, 0.2, "inter-block correlation"),
        _Opt("sigma_low", float, 0.1, "smallest asset deviation"),
        _Opt("sigma_high", float, 0.4, "largest asset deviation"),
        _Opt("sigma_seed", int, portfolio_mod.SIGMA_SEED,
             "seed of the fixed deviation draw"),
        _Opt("t_sweep", str, "50:500:25", "inclusive horizon sweep"),
        _Opt("q", str, "1.0,1.5", "comma-separated exponents"),
        _Opt("members", int, 20, "members per horizon"),
        _Opt("seed", int, 0, "master seed"),
        _Opt("workers", int, 1, "worker threads"),
    ],
}


def _add_command(sub, name, options):
    p = sub.add_parser(name)
    p.add_argument("--config", default=None, help="INI config file")
    p.add_argument("--outdir", default=None, help="output directory")
    for opt in options:
        flagname = "--" + opt.name.replace("_", "-")
        names = [opt.short, flagname] if opt.short else [flagname]
        if opt.flag:
            p.add_argument(*names, action="store_true", default=None,
                           help=opt.help)
        else:
            p.add_argument(*names, type=opt.cast, default=None,
                           help=opt.help, choices=opt.choices)
    return p


def _resolve(command, args):
    """Merge flags over config-file values over defaults."""
    section = {}
    if args.config:
        ini = configparser.ConfigParser()
        if not ini.read(args.config):
            raise BadParameters(f"cannot read config file {args.config!r}")
        if ini.has_section(command):
            section = dict(ini.items(command))
    cfg = {}
    for opt in _OPTIONS[command]:
        given = getattr(args, opt.name)
        if given is not None:
            cfg[opt.name] = given
        elif opt.name in section:
            raw = section[opt.name]
            cfg[opt.name] = (raw.strip().lower() in ("1", "true", "yes", "on")
                             if opt.flag else opt.cast(raw))
        else:
            cfg[opt.name] = opt.default
        if opt.required and cfg[opt.name] is None:
            raise BadParameters(f"{command} requires --{opt.name}")
    return cfg


def _outdir_of(args):
    out = args.outdir or os.environ.get(OUTDIR_ENV) or "."
    os.makedirs(out, exist_ok=True)
    return out


def _write_manifest(outdir, command, cfg, outputs):
    path = os.path.join(outdir, f"{command}_manifest.json")
    _write_json(path, {"command": command, "version": __version__,
                       "config": cfg, "outputs": outputs})


# ------------------------------------------------------------- workers

def _horizon_from(cfg):
    if cfg.get("t") is not None:
        return int(cfg["t"])
    if cfg.get("kappa") is not None:
        return int(round(cfg["n"] * cfg["kappa"]))
    raise BadParameters("need either -t or --kappa")


def _run_simulate(cfg, outdir):
    t = _horizon_from(cfg)
    kind = cfg["kind"]
    model = parse_model(cfg["model"], cfg["n"], cfg["m"])
    if kind != "two-channel" and isinstance(model, models.PartitionedModel):
        raise BadParameters("partitioned models need --kind two-channel")
    if kind == "two-channel":
        if cfg["m"] is None:
            raise BadParameters("two-channel requires -m")
        if not isinstance(model, models.PartitionedModel):
            raise BadParameters("two-channel requires a partitioned model "
                                "token (fig2, fig3, rank-one:..., banded:...)")
    if kind == "woe":
        if cfg["model"] not in (None, "identity"):
            raise BadParameters("woe takes no correlation model")
        model = None
    config = ensembles.EnsembleConfig(
        n=cfg["n"], t=t, sigma=cfg["sigma"], model=model,
        m=cfg["m"] if kind == "two-channel" else None,
        members=cfg["members"], seed=cfg["seed"])
    results = ensembles.ensemble_spectra(config, kind,
                                         workers=cfg["workers"])
    path = os.path.join(outdir, SPECTRA_CSV)
    _write_spectra_csv(path, results)
    meta = {"kind": kind, "fingerprint": config.fingerprint()}
    with open(os.path.join(outdir, SPECTRA_META_JSON), "w",
              encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    stacked = ensembles.eigenvalue_matrix(results)
    print(f"members={config.members} n={config.n} t={t} kind={kind}")
    print(f"support=[{stacked.min():.6g}, {stacked.max():.6g}] "
          f"mean={stacked.mean():.6g} "
          f"top={stacked[:, -1].mean():.6g}")
    return [SPECTRA_CSV, SPECTRA_META_JSON]


def _solve_requested(cfg):
    routes = [r for r in ("mp", "cwoe", "two_channel") if cfg[r]]
    if len(routes) != 1:
        raise BadParameters("pick exactly one of --mp, --cwoe, "
                            "--two-channel")
    return routes[0]


def _run_pastur(cfg, outdir):
    route = _solve_requested(cfg)
    grid = _parse_grid(cfg["grid"]) if cfg["grid"] else None
    outputs = [DENSITY_CSV]
    null_sol = None
    if route == "mp":
        if cfg["kappa"] is None:
            raise BadParameters("--mp needs --kappa")
        if grid is None:
            upper = pastur_mod.mp_edges(cfg["sigma"], cfg["kappa"])[1]
            grid = pastur_mod.default_grid(upper)
        sol = pastur_mod.mp_resolvent(grid, cfg["sigma"], cfg["kappa"],
                                      epsilon=cfg["epsilon"])
    elif route == "cwoe":
        if cfg["kappa"] is None or cfg["n"] is None:
            raise BadParameters("--cwoe needs --kappa and -n")
        model = parse_model(cfg["model"], cfg["n"])
        if isinstance(model, models.PartitionedModel):
            raise BadParameters("--cwoe takes a one-channel model")
        sol = pastur_mod.solve_cwoe(model.spectrum, cfg["kappa"],
                                    sigma=cfg["sigma"], grid=grid,
                                    epsilon=cfg["epsilon"])
    else:
        if cfg["kn"] is None or cfg["km"] is None:
            raise BadParameters("--two-channel needs --kn and --km")
        n = cfg["n"] if cfg["n"] is not None else 384
        m = cfg["m"] if cfg["m"] is not None else 640
        if cfg["zeta_from"]:
            model = parse_model(cfg["zeta_from"], n, m)
            if not isinstance(model, models.PartitionedModel):
                raise BadParameters("--zeta-from needs a partitioned token")
            zeta = model.zeta_spectrum
        else:
            zeta = np.zeros(n)
        sol = pastur_mod.solve_two_channel(zeta, cfg["kn"], cfg["km"],
                                           grid=grid,
                                           epsilon=cfg["epsilon"])
        null_sol = pastur_mod.cubic_null(cfg["kn"], cfg["km"], sol.grid,
                                         epsilon=cfg["epsilon"])
        _write_density_csv(os.path.join(outdir, DENSITY_NULL_CSV), null_sol)
        outputs.append(DENSITY_NULL_CSV)
    _write_density_csv(os.path.join(outdir, DENSITY_CSV), sol)
    flagged = int(np.sum(~sol.converged))
    print(f"points={sol.grid.size} flagged={flagged} "
          f"mass={np.trapezoid(sol.rho, sol.grid):.6g}")
    if cfg["overlay"]:
        spectra = _read_spectra_csv(cfg["overlay"])
        values = np.concatenate(list(spectra.values()))
        l1 = compare.histogram_l1(values, sol.grid, sol.rho,
                                  bins=cfg["bins"])
        _write_json(os.path.join(outdir, OVERLAY_JSON),
                    {"l1": l1, "bins": cfg["bins"],
                     "members": len(spectra),
                     "eigenvalues": int(values.size)})
        outputs.append(OVERLAY_JSON)
        print(f"overlay L1={l1:.6g} over {cfg['bins']} bins")
    return outputs


def _run_analyze(cfg, outdir):
    raw = panel_mod.read_panel_csv(cfg["csv"], transpose=cfg["transpose"],
                                   index_column=cfg["index_column"])
    if cfg["returns"]:
        returns = raw
    else:
        returns = panel_mod.DataPanel(
            values=panel_mod.log_returns(raw.values), labels=raw.labels)
    std = panel_mod.standardize(returns)
    corr = panel_mod.lagged_correlation(std, std, lag=cfg["lag"])
    _write_matrix_csv(os.path.join(outdir, CORRELATION_CSV), corr.matrix,
                      returns.labels)
    outputs = [CORRELATION_CSV]
    report = {"n": corr.n, "t": corr.horizon, "lag": corr.lag,
              "symmetric": corr.symmetric,
              "kappa": corr.horizon / corr.n}
    if corr.symmetric:
        eig = np.sort(np.linalg.eigvalsh(corr.matrix))
        with open(os.path.join(outdir, SPECTRUM_CSV), "w") as fh:
            fh.write("index,eigenvalue\n")
            for i, v in enumerate(eig):
                fh.write("%d,%r\n" % (i, float(v)))
        outputs.append(SPECTRUM_CSV)
        kappa = corr.horizon / corr.n
        lo, hi = pastur_mod.mp_edges(1.0, kappa)
        grid = pastur_mod.default_grid(hi)
        nonzero = eig[np.abs(eig) > 1e-12]
        report["mp_null"] = {
            "l1": compare.histogram_l1(nonzero, grid,
                                       pastur_mod.mp_density(grid, 1.0,
                                                             kappa)),
            "edges_theory": [lo, hi],
            "edges_measured": [float(nonzero.min()), float(nonzero.max())],
            "top_eigenvalues": [float(v) for v in eig[-5:][::-1]],
        }
    if cfg["powermap"] is not None:
        mapped = powermap_mod.power_map(corr, cfg["powermap"])
        _write_matrix_csv(os.path.join(outdir, DENOISED_CSV), mapped.matrix,
                          returns.labels)
        outputs.append(DENOISED_CSV)
        report["powermap"] = {"q": cfg["powermap"], "alpha": mapped.alpha}
        if corr.symmetric and corr.horizon < corr.n:
            es = powermap_mod.emerging_spectrum(corr, mapped.alpha)
            report["powermap"]["emerging"] = {
                "count": int(es.emerging.size),
                "mean": float(es.emerging.mean()),
                "std": float(es.emerging.std()),
            }
    _write_json(os.path.join(outdir, ANALYZE_JSON), report)
    outputs.append(ANALYZE_JSON)
    print(f"n={report['n']} t={report['t']} lag={report['lag']} "
          f"symmetric={str(report['symmetric']).lower()}")
    return outputs


def _run_fluct(cfg, outdir):
    spectra = _read_spectra_csv(cfg["spectra"])
    lam, rho, _ = _read_density_csv(cfg["density"])
    density = pastur_mod.ResolventSolution(
        grid=lam, re_g=np.zeros_like(lam), im_g=-np.pi * rho, rho=rho,
        pv=np.zeros_like(lam), epsilon=0.0,
        converged=np.ones(lam.size, dtype=bool),
        residual=np.zeros_like(lam))
    window = (_parse_range(cfg["window"], "window") if cfg["window"]
              else None)
    unfolded = []
    for member in sorted(spectra):
        values = spectra[member]
        values = values[values != 0.0]       # zero modes carry no spacing
        unfolded.append(fluctuations.unfold(values, density, window=window))
    r_values = np.arange(1, cfg["r_max"] + 1, dtype=float)
    curve = fluctuations.number_variance(unfolded, r_values)
    path = os.path.join(outdir, FLUCT_CSV)
    with open(path, "w") as fh:
        fh.write("r,sigma2,stderr,goe_reference\n")
        for i, r in enumerate(curve.r):
            fh.write("%r,%r,%r,%r\n"
                     % (float(r), float(curve.sigma2[i]),
                        float(curve.stderr[i]),
                        float(fluctuations.goe_number_variance(float(r)))))
    print(f"members={len(unfolded)} r_max={cfg['r_max']} "
          f"sigma2(1)={curve.sigma2[0]:.4f}")
    return [FLUCT_CSV]


def _run_powermap(cfg, outdir):
    token = cfg["model"]
    model_c = None
    if token in (None, "identity"):
        kind, model = "woe", None
    else:
        name, _, body = token.partition(":")
        if name != "equal-cross":
            raise BadParameters("powermap supports identity or "
                                "equal-cross:c=V models only")
        model_c = _kv_args(body, token)["c"]
        kind = "cwoe"
        model = models.equal_cross(cfg["n"], model_c)
    config = ensembles.EnsembleConfig(n=cfg["n"], t=cfg["t"], model=model,
                                      members=cfg["members"],
                                      seed=cfg["seed"])
    mats = [ensembles.sample_matrix(config, kind, member)
            for member in range(cfg["members"])]
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        report = powermap_mod.moment_report(mats, alpha=cfg["alpha"],
                                            model=model_c, t=cfg["t"])
    payload = report.as_dict()
    payload["warnings"] = [str(w.message) for w in caught]
    _write_json(os.path.join(outdir, POWERMAP_JSON), payload)
    for w in caught:
        print(f"note: {w.message}", file=sys.stderr)
    print(f"alpha={report.alpha} members={report.members} "
          f"dm1={report.measured['dm1']:.6g} "
          f"theory={report.theory['dm1']:.6g}")
    return [POWERMAP_JSON]


def _run_portfolio(cfg, outdir):
    if cfg["n"] % cfg["block_size"]:
        raise BadParameters("-n must be a multiple of --block-size")
    market = portfolio_mod.block_market(
        blocks=cfg["n"] // cfg["block_size"], size=cfg["block_size"],
        rho_in=cfg["rho_in"], rho_out=cfg["rho_out"],
        sigma_low=cfg["sigma_low"], sigma_high=cfg["sigma_high"],
        sigma_seed=cfg["sigma_seed"])
    t_values = _parse_sweep(cfg["t_sweep"])
    q_values = _parse_qlist(cfg["q"])
    rows = portfolio_mod.run_study(market, t_values, q_values,
                                   members=cfg["members"], seed=cfg["seed"],
                                   workers=cfg["workers"])
    portfolio_mod.write_study_csv(rows, os.path.join(outdir, STUDY_CSV))
    summary = portfolio_mod.study_summary(rows)
    _write_json(os.path.join(outdir, STUDY_JSON), summary)
    missing = sum(1 for r in rows if r["ratio"] is None)
    print(f"rows={len(rows)} missing={missing} horizons={len(t_values)} "
          f"exponents={len(q_values)}")
    return [STUDY_CSV, STUDY_JSON]


_RUNNERS = {
    "simulate": _run_simulate,
    "pastur": _run_pastur,
    "analyze": _run_analyze,
    "fluct": _run_fluct,
    "powermap": _run_powermap,
    "portfolio": _run_portfolio,
}


# ---------------------------------------------------------------- main

def build_parser():
    parser = argparse.ArgumentParser(
        prog="rmtlab",
        description="Random-matrix correlation toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, options in _OPTIONS.items():
        _add_command(sub, name, options)
    replay = sub.add_parser("replay")
    replay.add_argument("manifest", help="manifest JSON from a prior run")
    replay.add_argument("--outdir", default=None)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "replay":
            with open(args.manifest) as fh:
                manifest = json.load(fh)
            command = manifest["command"]
            if command not in _RUNNERS:
                raise BadParameters(f"manifest names unknown command "
                                    f"{command!r}")
            cfg = manifest["config"]
            outdir = args.outdir or os.environ.get(OUTDIR_ENV) or "."
            os.makedirs(outdir, exist_ok=True)
        else:
            command = args.command
            cfg = _resolve(command, args)
            outdir = _outdir_of(args)
        outputs = _RUNNERS[command](cfg, outdir)
        _write_manifest(outdir, command, cfg, outputs)
        return 0
    except RmtlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
