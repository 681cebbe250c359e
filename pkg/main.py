from __future__ import annotations

import argparse
import asyncio
import logging
import sys
from typing import Sequence

from app.config import build_run_config, parse_resize, settings
from app.errors import ConfigError, LabelError
from app.logger import setup_logging
from app.models import CropMode, FlowProviderKind, InputFormat, LabelSubset, Scenario
from app.pipeline.export import JsonlWriter, read_record_line, write_csv
from app.pipeline.extract import extract_async
from app.pipeline.inspect import describe_record
from app.pipeline.visualize import visualize
from app.synth.presets import fig2_scene, gen_global_pan, gen_random_scene, gen_rotating_texture
from app.synth.writer import write_synth
from app.utils.run_timeline import RunTimeline

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_CONFIG = 2

logger = logging.getLogger(__name__)


# ═══════════════════════════════════════════════
# Аргументы
# ═══════════════════════════════════════════════


def _add_clip_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=[f.value for f in InputFormat], default=InputFormat.Y4M.value)
    p.add_argument("--clip-len", type=int, default=16)
    p.add_argument("--stride", type=int, default=16)
    p.add_argument("--resize", default="171x128", help="WIDTHxHEIGHT или none")
    p.add_argument("--crop", choices=[c.value for c in CropMode], default=CropMode.CENTER.value)
    p.add_argument("--crop-size", default="112x112", help="WIDTHxHEIGHT")
    p.add_argument("--flow", choices=[f.value for f in FlowProviderKind], default=FlowProviderKind.VARIATIONAL.value)
    p.add_argument("--bins", type=int, default=settings.default_bins)
    p.add_argument("--seed", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="labels", description="Метки движения и цвета для видеоклипов")
    parser.add_argument("-v", "--verbose", action="store_true", help="DEBUG-логи")
    sub = parser.add_subparsers(dest="command", required=True)

    p_extract = sub.add_parser("extract", help="извлечь метки в JSONL")
    p_extract.add_argument("--input", nargs="+", required=True)
    _add_clip_args(p_extract)
    p_extract.add_argument("--out", required=True)
    p_extract.add_argument("--csv", default=None, help="дополнительно записать CSV")
    p_extract.add_argument("--normalize", action="store_true")
    p_extract.add_argument("--workers", type=int, default=settings.default_workers)
    p_extract.add_argument("--labels", choices=[s.value for s in LabelSubset], default=LabelSubset.ALL.value)

    p_synth = sub.add_parser("synth", help="синтетический клип с известным потоком")
    p_synth.add_argument("--scenario", choices=[s.value for s in Scenario], required=True)
    p_synth.add_argument("--out", required=True)
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.add_argument("--frames", type=int, default=16, help="длина клипа для pan, random и rotate")
    p_synth.add_argument("--velocity", default="2,0", help="скорость pan: dx,dy")

    p_vis = sub.add_parser("visualize", help="отладочные карты для первого клипа")
    p_vis.add_argument("--input", required=True)
    _add_clip_args(p_vis)
    p_vis.add_argument("--out-prefix", required=True)
    p_vis.add_argument("--dump-flow", action="store_true")

    p_inspect = sub.add_parser("inspect", help="расшифровать запись JSONL")
    p_inspect.add_argument("--labels-file", required=True)
    p_inspect.add_argument("--record", type=int, required=True, help="номер строки, с 1")
    return parser


def config_from_args(args: argparse.Namespace, **extra):
    resize = args.resize.lower() != "none"
    rh, rw = parse_resize(args.resize) if resize else (128, 171)
    ch, cw = parse_resize(args.crop_size)
    return build_run_config(
        clip_len=args.clip_len,
        stride=args.stride,
        resize=resize,
        resize_height=rh,
        resize_width=rw,
        crop_mode=args.crop,
        crop_height=ch,
        crop_width=cw,
        input_format=args.format,
        flow_provider=args.flow,
        bins=args.bins,
        seed=args.seed,
        conventions_version=settings.conventions_version,
        **extra,
    )


# ═══════════════════════════════════════════════
# Команды
# ═══════════════════════════════════════════════


async def cmd_extract(args: argparse.Namespace) -> int:
    config = config_from_args(
        args,
        normalize=args.normalize,
        workers=args.workers,
        label_subset=args.labels,
    )
    timeline = RunTimeline(logger, "labels extract")
    timeline.log_banner([
        ("Уровень логирования", settings.log_level),
        ("APP_ENV", settings.app_env),
        ("Источников", len(args.input)),
        ("Клип / шаг", f"{config.clip_len} / {config.stride}"),
        ("Ресайз", f"{config.resize_width}x{config.resize_height}" if config.resize else "нет"),
        ("Кроп", f"{config.crop_mode.value} {config.crop_width}x{config.crop_height}"),
        ("Поток", config.flow_provider.value),
        ("Воркеров", config.workers),
        ("params_digest", config.params_digest()),
    ])

    with JsonlWriter(args.out) as writer:
        result = await extract_async(config, args.input, on_record=writer.write, timeline=timeline)

    if args.csv:
        write_csv(result.records, args.csv, subset=config.label_subset, normalize=config.normalize)

    timeline.log_summary(len(result.records), [f.describe() for f in result.failures])
    return EXIT_OK if result.ok else EXIT_PARTIAL


def cmd_synth(args: argparse.Namespace) -> int:
    scenario = Scenario(args.scenario)
    match scenario:
        case Scenario.FIG2:
            synth = fig2_scene()
        case Scenario.PAN:
            try:
                vx, vy = (float(x) for x in args.velocity.split(","))
            except ValueError as e:
                raise ConfigError(f"bad --velocity {args.velocity!r}, expected dx,dy") from e
            synth = gen_global_pan(args.seed, (vx, vy), frames=args.frames)
        case Scenario.ROTATE:
            synth = gen_rotating_texture(args.seed, frames=args.frames)
        case _:
            synth = gen_random_scene(args.seed, frames=args.frames)
    root = write_synth(synth, args.out)
    print(root / "frames")
    return EXIT_OK


def cmd_visualize(args: argparse.Namespace) -> int:
    config = config_from_args(args)
    for path in visualize(args.input, config, args.out_prefix, dump_flow=args.dump_flow):
        print(path)
    return EXIT_OK


def cmd_inspect(args: argparse.Namespace) -> int:
    data = read_record_line(args.labels_file, args.record)
    for line in describe_record(data):
        print(line)
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(settings, verbose=args.verbose)

    try:
        match args.command:
            case "extract":
                return asyncio.run(cmd_extract(args))
            case "synth":
                return cmd_synth(args)
            case "visualize":
                return cmd_visualize(args)
            case "inspect":
                return cmd_inspect(args)
    except ConfigError as e:
        logger.error("❌ Ошибка конфигурации: %s", e)
        return EXIT_CONFIG
    except (LabelError, OSError) as e:
        logger.error("❌ %s", e, exc_info=settings.is_dev)
        return EXIT_PARTIAL
    except KeyboardInterrupt:
        print("\n🛑 Остановлено пользователем")
        return EXIT_PARTIAL
    parser.error(f"unknown command {args.command}")
    return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
