"""
Linha de comando - VesselSurrogate
Subcomandos gen-data, train, eval, benchmark e predict sobre um RunConfig.
Código de saída 0 em sucesso, 1 em qualquer erro (2 para uso incorreto).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .controllers.surrogate_controller import SurrogateController
from .core.config import RunConfig, load_run_config
from .core.errors import ConfigError
from .core.logging_config import configure_logging

EXIT_OK = 0
EXIT_FAILURE = 1


def _sizes(text: str) -> list[int]:
    try:
        sizes = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"lista de inteiros inválida: {text!r}") from None
    if not sizes:
        raise argparse.ArgumentTypeError("lista de tamanhos vazia")
    return sizes


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="arquivo TOML com o RunConfig")
    common.add_argument("--seed", type=int, help="semente mestre")
    common.add_argument("--jobs", type=int, help="processos de trabalho")
    common.add_argument("--out", help="arquivo de saída")
    common.add_argument("--log-level", help="DEBUG, INFO, WARNING...")

    parser = argparse.ArgumentParser(
        prog="vessel-surrogate",
        description="Surrogate de tensão de von Mises para vasos de pressão submarinos",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser("gen-data", parents=[common], help="gera o dataset pelo oráculo")
    gen.add_argument("--n-samples", type=int)
    gen.add_argument("--method", dest="sampling_method", choices=["uniform", "latin_hypercube"])

    train = commands.add_parser("train", parents=[common], help="treina o deep ensemble")
    train.add_argument("--data", help="CSV de treino (padrão: data_path)")
    train.add_argument("--n-train", type=int)
    train.add_argument("--k", dest="ensemble_k", type=int, help="membros do ensemble")

    evaluate = commands.add_parser("eval", parents=[common], help="avalia um ensemble gravado")
    evaluate.add_argument("--model", help="arquivo do ensemble (padrão: model_path)")
    evaluate.add_argument("--data")

    bench = commands.add_parser("benchmark", parents=[common], help="ensemble x floresta x boosting")
    bench.add_argument("--data")
    bench.add_argument("--n-train", type=int)
    bench.add_argument("--k", dest="ensemble_k", type=int)
    bench.add_argument("--out-models", help="diretório para gravar os três modelos")
    bench.add_argument("--train-sizes", type=_sizes, help="ex.: 1000,2000,4000")

    predict = commands.add_parser("predict", parents=[common], help="tensão de um projeto ou de um CSV")
    predict.add_argument("--model")
    predict.add_argument("--depth", type=float, help="m")
    predict.add_argument("--length", type=float, help="m")
    predict.add_argument("--thickness", type=float, help="m")
    predict.add_argument("--radius", type=float, help="raio externo, m")
    predict.add_argument("--designs", help="CSV com depth_m,length_m,thickness_m,radius_m")
    return parser


def _load_config(args: argparse.Namespace) -> RunConfig:
    return load_run_config(
        args.config,
        seed=args.seed,
        jobs=args.jobs,
        log_level=args.log_level,
        n_samples=getattr(args, "n_samples", None),
        sampling_method=getattr(args, "sampling_method", None),
        n_train=getattr(args, "n_train", None),
        ensemble_k=getattr(args, "ensemble_k", None),
    )


def _design_flags(args: argparse.Namespace) -> Optional[dict]:
    values = {name: getattr(args, name) for name in ("depth", "length", "thickness", "radius")}
    if all(value is None for value in values.values()):
        return None
    missing = [name for name, value in values.items() if value is None]
    if missing:
        raise ConfigError(f"projeto incompleto, faltam: {', '.join('--' + m for m in missing)}")
    return values


def _dispatch(args: argparse.Namespace, config: RunConfig) -> dict:
    if args.command == "gen-data":
        return SurrogateController.generate_data(config, out=args.out)
    if args.command == "train":
        return SurrogateController.train(config, data_path=args.data, out=args.out)
    if args.command == "eval":
        return SurrogateController.evaluate(config, model_path=args.model, data_path=args.data, out=args.out)
    if args.command == "benchmark":
        return SurrogateController.benchmark(
            config,
            data_path=args.data,
            out=args.out,
            out_models=args.out_models,
            train_sizes=args.train_sizes,
        )
    return SurrogateController.predict(
        config,
        model_path=args.model,
        design=_design_flags(args),
        designs_csv=args.designs,
        out=args.out,
    )


def _render(command: str, result: dict) -> None:
    data = result["data"] or {}
    if command in ("eval", "benchmark"):
        print(data["table"])
    if command == "benchmark":
        for name, factor in data["fea_speedup"].items():
            print(f"{name}: {factor:.3g}x mais rápido que uma simulação FEA")
    if command == "train":
        print(f"param_count: {data['param_count']}")
    if command == "predict" and "predictions" in data and not data.get("path"):
        print(json.dumps(data["predictions"], indent=1))
    print(result["message"])


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _load_config(args)
        configure_logging(config.log_level)
        result = _dispatch(args, config)
    except ConfigError as exc:
        print(f"erro de configuração: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    if not result["success"]:
        print(f"erro: {result['message']}", file=sys.stderr)
        return EXIT_FAILURE
    _render(args.command, result)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
