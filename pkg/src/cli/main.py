import asyncio
import os
import sys
from functools import wraps
from pathlib import Path
from typing import Any, Dict, List, Optional

import click

from src.config.config import Config
from src.stages.base import RunConfig
from src.stages.registry import StageRegistry
from src.util.errors import BandextError
from src.util.logging import LogConfig, Logger

PROG_NAME = "bandext"


def async_command(f):
    """Decorator to run async click commands"""

    @wraps(f)
    def wrapper(*args, **kwargs):
        logger = Logger("CLI")
        loop = asyncio.new_event_loop()
        try:
            asyncio.set_event_loop(loop)
            return loop.run_until_complete(f(*args, **kwargs))

        except KeyboardInterrupt:
            logger.info("Received keyboard interrupt, shutting down...")
            pending = asyncio.all_tasks(loop)
            for task in pending:
                task.cancel()
            if pending:
                loop.run_until_complete(asyncio.gather(*pending, return_exceptions=True))
            raise click.Abort()

        finally:
            loop.run_until_complete(loop.shutdown_default_executor())
            loop.close()
            asyncio.set_event_loop(None)

    return wrapper


def out_option(f):
    return click.option("--out", type=click.Path(file_okay=False), default=None, help="Output directory")(f)


def _override(key: str, value: Any) -> None:
    if value is not None:
        Config().set(key, value)


def config_options(f):
    """--config and --seed after the subcommand name

    A subcommand --config replaces the group's file; seeds given on the group
    still apply unless the subcommand sets its own.
    """

    @wraps(f)
    def wrapper(*args, config_path=None, seed=None, **kwargs):
        ctx = click.get_current_context()
        if config_path:
            Config.load(config_path)
            _override("seed", ctx.obj.get("seed"))
        _override("seed", seed)
        return f(*args, **kwargs)

    wrapper = click.option("--seed", type=int, default=None, help="Global seed for this run")(wrapper)
    return click.option(
        "--config", "config_path", type=click.Path(dir_okay=False), default=None, help="Config file, or a SynthConfig JSON"
    )(wrapper)


async def _dispatch(ctx, stage: str, out: Optional[str], paths: Dict[str, Any] = None, params: Dict[str, Any] = None):
    """Build the RunConfig for a stage, run it and print its result"""
    config = Config()
    run_config = RunConfig(
        stage=stage,
        config=config.as_dict(),
        out_dir=Path(out) if out else Path(config.output_dir) / stage,
        paths={k: v for k, v in (paths or {}).items() if v is not None},
        params={k: v for k, v in (params or {}).items() if v is not None},
        log_level=ctx.obj["log_level"],
    )

    async def progress(message: str) -> None:
        ctx.obj["logger"].info(message)

    result = await StageRegistry().run(run_config, progress)
    if not result.ok:
        raise click.ClickException(result.error)
    click.echo(str(result))
    return result


@click.group()
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None, help="TOML, YAML or JSON config file")
@click.option("--seed", type=int, default=None, help="Global seed (falls back to BANDEXT_SEED, then the config)")
@click.option("-v", "--verbose", is_flag=True, help="Enable verbose logging (same as --log-level DEBUG)")
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
    default=None,
    help="Set logging level",
)
@click.pass_context
def cli(ctx, config_path, seed, verbose, log_level):
    """bandext: seismic bandwidth extension with a conditional GAN"""
    ctx.ensure_object(dict)

    config = Config.load(config_path or os.environ.get("BANDEXT_CONFIG") or None)
    _override("seed", seed)
    ctx.obj["seed"] = seed

    level = "DEBUG" if verbose else (log_level or config.get("log_level", "WARNING")).upper()
    LogConfig.set_log_level(level)
    ctx.obj["verbose"] = verbose
    ctx.obj["log_level"] = level
    ctx.obj["logger"] = Logger("CLI")


@cli.command()
@config_options
@out_option
@click.pass_context
@async_command
async def synth(ctx, out):
    """Generate synthetic seismic/log pairs"""
    await _dispatch(ctx, "synth", out)


@cli.command()
@config_options
@click.option("--manifest", type=click.Path(), required=True, help="Dataset manifest")
@click.option("--band", default=None, help="Seismic band f1-f2-f3-f4")
@out_option
@click.pass_context
@async_command
async def tie(ctx, manifest, band, out):
    """Score and classify well ties"""
    await _dispatch(ctx, "tie", out, paths={"manifest": manifest}, params={"band": band})


@cli.command()
@config_options
@click.option("--manifest", type=click.Path(), required=True, help="Tie-classified manifest")
@out_option
@click.pass_context
@async_command
async def select(ctx, manifest, out):
    """Pick training pairs by tie class"""
    await _dispatch(ctx, "select", out, paths={"manifest": manifest})


def train_options(f):
    f = click.option("--checkpoint-every", type=click.IntRange(min=1), default=None, help="Epochs between checkpoints")(f)
    f = click.option("--epochs", type=click.IntRange(min=1), default=None, help="Training epochs")(f)
    f = click.option("--lambda-l1", type=click.FloatRange(min=0), default=None, help="Weight of the L1 term")(f)
    return f


def _train_overrides(lambda_l1, epochs, checkpoint_every) -> None:
    _override("train.lambda_l1", lambda_l1)
    _override("train.epochs", epochs)
    _override("train.checkpoint_every", checkpoint_every)


@cli.command()
@config_options
@click.option("--manifest", type=click.Path(), required=True, help="Manifest with train roles")
@train_options
@out_option
@click.pass_context
@async_command
async def train(ctx, manifest, lambda_l1, epochs, checkpoint_every, out):
    """Train the seismic-to-broadband generator"""
    _train_overrides(lambda_l1, epochs, checkpoint_every)
    await _dispatch(ctx, "train", out, paths={"manifest": manifest})


@cli.command()
@config_options
@click.option("--checkpoints", type=click.Path(), required=True, help="Directory of training checkpoints")
@click.option("--volume", type=click.Path(), default=None, help="Volume directory with index.json")
@click.option("--manifest", type=click.Path(), default=None, help="Manifest whose seismic traces are processed")
@click.option("--realizations", type=click.IntRange(min=1), default=None, help="Realizations per trace")
@click.option("--workers", type=click.IntRange(min=1), default=None, help="Worker threads for volumes")
@click.option("--csv", is_flag=True, help="Also export the volume as long-format CSV")
@out_option
@click.pass_context
@async_command
async def infer(ctx, checkpoints, volume, manifest, realizations, workers, csv, out):
    """Generate broadband traces for a volume or the wells of a manifest"""
    await _dispatch(
        ctx,
        "infer",
        out,
        paths={"checkpoints": checkpoints, "volume": volume, "manifest": manifest},
        params={"realizations": realizations, "workers": workers, "csv": csv or None},
    )


@cli.command()
@config_options
@click.option("--checkpoints", type=click.Path(), required=True, help="Directory of training checkpoints")
@click.option("--input", "input_path", type=click.Path(), default=None, help="BXT1 seismic trace")
@click.option("--manifest", type=click.Path(), default=None, help="Manifest holding --well")
@click.option("--well", default=None, help="Well id within the manifest")
@click.option("--realizations", type=click.IntRange(min=1), default=None, help="Realizations")
@out_option
@click.pass_context
@async_command
async def stats(ctx, checkpoints, input_path, manifest, well, realizations, out):
    """Ensemble mean, standard deviation and histograms for one trace"""
    await _dispatch(
        ctx,
        "stats",
        out,
        paths={"checkpoints": checkpoints, "input": input_path, "manifest": manifest},
        params={"well": well, "realizations": realizations},
    )


@cli.command(name="filter")
@config_options
@click.option("--input", "input_path", type=click.Path(), required=True, help="BXT1 file or volume directory")
@click.option("--band", default=None, help="Band f1-f2-f3-f4")
@out_option
@click.pass_context
@async_command
async def filter_command(ctx, input_path, band, out):
    """Band-pass a trace file or a volume directory"""
    await _dispatch(ctx, "filter", out, paths={"input": input_path}, params={"band": band})


@cli.command()
@config_options
@click.option("--original", type=click.Path(), required=True, help="Input BXT1 trace")
@click.option("--generated", type=click.Path(), required=True, help="Generated BXT1 trace")
@out_option
@click.pass_context
@async_command
async def spectrum(ctx, original, generated, out):
    """Compare low/mid/high band energy of two traces"""
    await _dispatch(ctx, "spectrum", out, paths={"original": original, "generated": generated})


@cli.command()
@config_options
@click.option("--manifest", type=click.Path(), required=True, help="Manifest with roles")
@click.option("--checkpoints", type=click.Path(), required=True, help="Directory of training checkpoints")
@click.option("--realizations", type=click.IntRange(min=1), default=None, help="Realizations per well")
@out_option
@click.pass_context
@async_command
async def qc(ctx, manifest, checkpoints, realizations, out):
    """Blind-well correlation, band consistency, sidelobe and spectrum QC"""
    await _dispatch(
        ctx, "qc", out, paths={"manifest": manifest, "checkpoints": checkpoints}, params={"realizations": realizations}
    )


@cli.command()
@config_options
@click.option("--manifest", type=click.Path(), required=True, help="Tie-classified manifest")
@click.option("--held-out", default=None, help="Held-out well id")
@click.option("--realizations", type=click.IntRange(min=1), default=None, help="Realizations for the held-out output")
@train_options
@out_option
@click.pass_context
@async_command
async def study(ctx, manifest, held_out, realizations, lambda_l1, epochs, checkpoint_every, out):
    """Training-combination sensitivity at a held-out well"""
    _train_overrides(lambda_l1, epochs, checkpoint_every)
    params = {"held_out": held_out, "realizations": realizations}
    await _dispatch(ctx, "study", out, paths={"manifest": manifest}, params=params)


def run(argv: Optional[List[str]] = None) -> int:
    """Run the CLI and return the exit code: 0 success, 1 domain error, 2 usage error"""
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv:
        with click.Context(cli, info_name=PROG_NAME) as ctx:
            click.echo(ctx.get_help(), err=True)
        return 2

    try:
        rv = cli.main(args=argv, prog_name=PROG_NAME, standalone_mode=False)
    except click.UsageError as e:
        e.show()
        return 2
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except click.Abort:
        click.echo("Aborted!", err=True)
        return 1
    except BandextError as e:
        click.echo(f"Error: {e}", err=True)
        return 1
    return rv if isinstance(rv, int) else 0


if __name__ == "__main__":
    sys.exit(run())
