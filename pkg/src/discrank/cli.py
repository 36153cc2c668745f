"""Command-line front end: generate, fit, classify, predict, export, benchmark.

Exit codes: 0 success, 2 usage or input error, 3 convergence failure
(the report file is still written in that case).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

from . import games
from .disc import DiscModel, MEloModel
from .elo import EloModel
from .errors import ConvergenceFailure, DiscRankError
from .evaluation import (
    SplitSpec,
    benchmark,
    mse,
    split,
    write_benchmark_csv,
    write_benchmark_json,
)
from .geometry import Verdict
from .payoff import (
    ObservedPayoff,
    aggregate,
    filter_min_count,
    load_matches_csv,
    load_payoff_json,
    save_payoff_json,
)

USAGE_ERROR = 2
CONVERGENCE_ERROR = 3

MODEL_CHOICES = ("elo", "elopp", "disc", "melo", "schur-prob")
GAME_CHOICES = ("elo", "disc", "cyclic-disc", "interp", "example3")


def _default_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    return int(os.environ.get("DISCRANK_SEED", "0"))


def _load_input(path) -> ObservedPayoff:
    if str(path).endswith(".json"):
        return load_payoff_json(path)
    return aggregate(load_matches_csv(path))


def _save_model(model, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(model.to_json_dict(), handle, indent=2, sort_keys=True)
        handle.write("\n")


def load_model(path):
    with open(path, encoding="utf-8") as handle:
        payload = json.load(handle)
    kind = payload.get("model")
    if kind == "elo":
        return EloModel.from_json_dict(payload)
    if kind == "melo":
        return MEloModel.from_json_dict(payload)
    if kind == "disc":
        return DiscModel.from_json_dict(payload)
    raise DiscRankError(f"unknown model kind {kind!r} in {path}")


def _build_spec(args) -> games.GameSpec:
    seed = _default_seed(args)
    if args.game == "elo":
        return games.random_elo_game(args.n, seed)
    if args.game == "disc":
        return games.random_disc_game(args.n, seed)
    if args.game == "cyclic-disc":
        return games.canonical_cyclic_disc(args.n)
    if args.game == "interp":
        if args.ratio is None:
            raise DiscRankError("--ratio is required for --game interp")
        return games.Interpolated(
            elo=games.random_elo_game(args.n, seed),
            disc=games.canonical_cyclic_disc(args.n),
            ratio=args.ratio,
        )
    if args.game == "example3":
        if args.gamma is None or args.delta is None:
            raise DiscRankError("--gamma and --delta are required for --game example3")
        return games.ExampleThree(gamma=args.gamma, delta=args.delta)
    raise DiscRankError(f"unknown game {args.game!r}")


def cmd_generate(args) -> int:
    if args.from_spec:
        with open(args.from_spec, encoding="utf-8") as handle:
            spec = games.spec_from_json_dict(json.load(handle))
    elif args.game is None:
        raise DiscRankError("either --game or --from-spec is required")
    else:
        spec = _build_spec(args)
    payoff = games.realize(spec).to_observed()
    save_payoff_json(payoff, args.out)
    if args.spec_out:
        with open(args.spec_out, "w", encoding="utf-8") as handle:
            json.dump(games.spec_to_json_dict(spec), handle, indent=2, sort_keys=True)
            handle.write("\n")
    return 0


def _make_model(args, seed):
    if args.model == "elo":
        if args.loss not in (None, "bce"):
            raise DiscRankError("model elo requires the bce loss")
        return EloModel(loss="bce")
    if args.model == "elopp":
        if args.loss not in (None, "quadratic"):
            raise DiscRankError("model elopp requires the quadratic loss")
        return EloModel(loss="quadratic")
    if args.model == "disc":
        loss = args.loss or "bce-sigmoid"
        if loss not in ("bce-sigmoid", "logit-mse"):
            raise DiscRankError("model disc supports bce-sigmoid or logit-mse losses")
        return DiscModel(k=args.k, loss_space=loss, ridge=args.ridge, seed=seed)
    if args.model == "melo":
        if args.loss not in (None, "prob-mse"):
            raise DiscRankError("model melo requires the prob-mse loss")
        return MEloModel(k=args.k, ridge=args.ridge, seed=seed)
    if args.model == "schur-prob":
        if args.loss not in (None, "prob-mse"):
            raise DiscRankError("model schur-prob requires the prob-mse loss")
        return DiscModel(k=args.k, loss_space="prob-mse", ridge=args.ridge, seed=seed)
    raise DiscRankError(f"unknown model {args.model!r}")


def cmd_fit(args) -> int:
    seed = _default_seed(args)
    obs = _load_input(args.input)
    if args.min_games > 1:
        obs = filter_min_count(obs, args.min_games)
    if args.test_fraction > 0:
        train, test = split(obs, SplitSpec(args.test_fraction, seed))
    else:
        train, test = obs, None
    model = _make_model(args, seed)
    if args.cv_ridge:
        from .disc import cross_validate_ridge

        grid = [float(x) for x in args.cv_ridge.split(",")]
        chosen = cross_validate_ridge(obs, model, grid, seed=seed)
        model.set_params(ridge=chosen)

    exit_code = 0
    try:
        model.fit(train)
    except ConvergenceFailure as failure:
        exit_code = CONVERGENCE_ERROR
        report = failure.diagnostics.get("report")
        if report is None:
            raise
        report.converged = False
        print(f"warning: {failure}", file=sys.stderr)
        if args.report:
            _write_report(report, None, None, seed, args.report)
        return exit_code

    report = model.report_
    report.seed = seed
    train_mse = mse(model, train)
    test_mse = mse(model, test) if test is not None else None
    if args.out:
        _save_model(model, args.out)
    if args.report:
        _write_report(report, train_mse, test_mse, seed, args.report)
    print(f"model={args.model} train_mse={train_mse:.6e}"
          + (f" test_mse={test_mse:.6e}" if test_mse is not None else ""))
    return exit_code


def _write_report(report, train_mse, test_mse, seed, path) -> None:
    payload = report.to_json_dict()
    payload["train_mse"] = train_mse
    payload["test_mse"] = test_mse
    payload["seed"] = seed
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")


def cmd_classify(args) -> int:
    model = load_model(args.model)
    if not isinstance(model, DiscModel):
        raise DiscRankError("only disc-family models can be classified")
    result = model.classify_main_component()
    verdict = (
        "FullyCyclic" if result.verdict is Verdict.FULLY_CYCLIC else "FullyTransitive"
    )
    print(f"verdict: {verdict}")
    print(f"origin: {result.origin_location.value}")
    if result.witness is not None:
        names = [model.players_[idx] for idx in result.witness]
        print(f"witness: {' -> '.join(names)}")
    return 0


def cmd_predict(args) -> int:
    model = load_model(args.model)
    rows = []
    with open(args.pairs, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None or not {"player_a", "player_b"}.issubset(
            reader.fieldnames
        ):
            raise DiscRankError("pairs CSV must have header columns player_a,player_b")
        pairs = [(row["player_a"], row["player_b"]) for row in reader]
    known = set(model.players_)
    unknown = sorted({p for pair in pairs for p in pair if p not in known})
    if unknown:
        raise DiscRankError(f"unknown players: {', '.join(unknown)}")
    for a, b in pairs:
        rows.append((a, b, model.predict_proba(a, b)))
    out = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        writer = csv.writer(out)
        writer.writerow(["player_a", "player_b", "p_hat"])
        for a, b, p in rows:
            writer.writerow([a, b, repr(p)])
    finally:
        if args.out:
            out.close()
    return 0


def cmd_export_embedding(args) -> int:
    model = load_model(args.model)
    if not isinstance(model, DiscModel):
        raise DiscRankError("only disc-family models carry embeddings")
    points = model.component_points(args.component)
    with open(args.out, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["player", "u", "v"])
        for name, (u, v) in zip(model.players_, points):
            writer.writerow([name, repr(float(u)), repr(float(v))])
    return 0


def cmd_benchmark(args) -> int:
    seed = _default_seed(args)
    named_games = []
    for token in args.games.split(","):
        token = token.strip()
        if token == "elo":
            spec = games.random_elo_game(args.n, seed)
        elif token == "disc":
            spec = games.canonical_cyclic_disc(args.n)
        elif token.startswith("interp"):
            ratio = float(token.removeprefix("interp"))
            spec = games.Interpolated(
                elo=games.random_elo_game(args.n, seed),
                disc=games.canonical_cyclic_disc(args.n),
                ratio=ratio,
            )
        else:
            spec = None
        if spec is None:
            named_games.append((token, load_payoff_json(token)))
        else:
            named_games.append((token, games.realize(spec).to_observed()))

    factories = []
    for token in args.models.split(","):
        token = token.strip()
        if token == "elo":
            factories.append(("elo", EloModel))
        elif token == "elopp":
            factories.append(("elopp", lambda: EloModel(loss="quadratic")))
        elif token.startswith("disc-k"):
            k = int(token.removeprefix("disc-k"))
            factories.append((token, lambda k=k: DiscModel(k=k, seed=seed)))
        elif token.startswith("melo-k"):
            k = int(token.removeprefix("melo-k"))
            factories.append((token, lambda k=k: MEloModel(k=k, seed=seed)))
        elif token.startswith("schur-prob-k"):
            k = int(token.removeprefix("schur-prob-k"))
            factories.append(
                (token, lambda k=k: DiscModel(k=k, loss_space="prob-mse", seed=seed))
            )
        else:
            raise DiscRankError(f"unknown benchmark model {token!r}")

    seeds = [int(s) for s in args.seeds.split(",")]
    rows = benchmark(named_games, factories, SplitSpec(args.test_fraction, seed), seeds=seeds)
    if args.out:
        write_benchmark_csv(rows, args.out)
    if args.json_out:
        write_benchmark_json(rows, args.json_out)
    if not args.out and not args.json_out:
        for row in rows:
            print(
                f"{row['game']},{row['model']},{row['params']},"
                f"{row['train_mse']:.3e},{row['test_mse']:.3e},"
                f"{row['elo_ratio'] if row['elo_ratio'] is None else round(row['elo_ratio'], 3)},"
                f"{row['seed']}"
            )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="discrank",
        description="Fit and evaluate rating models for symmetric zero-sum games.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("generate", help="write a synthetic payoff matrix as JSON")
    p_gen.add_argument("--game", choices=GAME_CHOICES, required=False)
    p_gen.add_argument("--n", type=int, default=32)
    p_gen.add_argument("--ratio", type=float, default=None)
    p_gen.add_argument("--gamma", type=float, default=None)
    p_gen.add_argument("--delta", type=float, default=None)
    p_gen.add_argument("--seed", type=int, default=None)
    p_gen.add_argument("--from-spec", default=None, help="read a GameSpec JSON instead of flags")
    p_gen.add_argument("--spec-out", default=None, help="also write the GameSpec JSON")
    p_gen.add_argument("--out", required=True)
    p_gen.set_defaults(func=cmd_generate)

    p_fit = sub.add_parser("fit", help="fit a rating model to matches or a payoff file")
    p_fit.add_argument("--input", required=True, help="matches .csv or payoff .json")
    p_fit.add_argument("--model", choices=MODEL_CHOICES, required=True)
    p_fit.add_argument("--k", type=int, default=1)
    p_fit.add_argument("--loss", default=None)
    p_fit.add_argument("--ridge", type=float, default=0.0)
    p_fit.add_argument("--cv-ridge", default=None, help="comma-separated ridge grid")
    p_fit.add_argument("--min-games", type=int, default=1)
    p_fit.add_argument("--test-fraction", type=float, default=0.2)
    p_fit.add_argument("--seed", type=int, default=None)
    p_fit.add_argument("--out", default=None, help="model JSON path")
    p_fit.add_argument("--report", default=None, help="fit report JSON path")
    p_fit.set_defaults(func=cmd_fit)

    p_cls = sub.add_parser("classify", help="classify a fitted disc model")
    p_cls.add_argument("--model", required=True)
    p_cls.set_defaults(func=cmd_classify)

    p_pred = sub.add_parser("predict", help="predict matchup probabilities")
    p_pred.add_argument("--model", required=True)
    p_pred.add_argument("--pairs", required=True, help="CSV with player_a,player_b")
    p_pred.add_argument("--out", default=None)
    p_pred.set_defaults(func=cmd_predict)

    p_exp = sub.add_parser("export-embedding", help="dump one component as player,u,v CSV")
    p_exp.add_argument("--model", required=True)
    p_exp.add_argument("--component", type=int, default=1)
    p_exp.add_argument("--out", required=True)
    p_exp.set_defaults(func=cmd_export_embedding)

    p_bench = sub.add_parser("benchmark", help="compare models across games")
    p_bench.add_argument("--games", required=True,
                         help="comma list: elo, disc, interp<ratio>, or payoff JSON paths")
    p_bench.add_argument("--models", required=True,
                         help="comma list: elo, elopp, disc-k<k>, melo-k<k>, schur-prob-k<k>")
    p_bench.add_argument("--n", type=int, default=32)
    p_bench.add_argument("--seeds", default="0,1,2")
    p_bench.add_argument("--test-fraction", type=float, default=0.2)
    p_bench.add_argument("--seed", type=int, default=None)
    p_bench.add_argument("--out", default=None, help="CSV output path")
    p_bench.add_argument("--json-out", default=None, help="JSON output path")
    p_bench.set_defaults(func=cmd_benchmark)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConvergenceFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CONVERGENCE_ERROR
    except (DiscRankError, FileNotFoundError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
