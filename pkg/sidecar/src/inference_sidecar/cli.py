"""Sidecar command line: serve, fetch weights, generate dev bundles."""

from __future__ import annotations

import logging
import sys

import click


@click.group()
def cli():
    """Inference sidecar for the visual provider RPC contract."""
    logging.basicConfig(level=logging.INFO, stream=sys.stderr)


@cli.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True, dir_okay=False))
def serve(config_path):
    """Serve the configured models until interrupted."""
    from .config import SidecarConfig
    from .faces import build_detector
    from .server import ModelRegistry, build_server

    config = SidecarConfig.from_file(config_path)
    registry = ModelRegistry.from_bundles(config.bundles)
    detector = build_detector(config.face_detector)
    server, port = build_server(
        registry,
        detector,
        port=config.port,
        max_parallel=config.max_parallel,
        max_request_bytes=config.max_request_bytes,
    )
    server.start()
    click.echo(f"listening on 127.0.0.1:{port}", err=True)
    server.wait_for_termination()


@cli.command("fetch-weights")
@click.option("--manifest", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--dest", required=True, type=click.Path(file_okay=False))
def fetch_weights_cmd(manifest, dest):
    """Download checkpoints from a manifest, verifying SHA-256 sums."""
    from .weights import fetch_weights

    for path in fetch_weights(manifest, dest):
        click.echo(str(path))


@cli.command("make-dev-weights")
@click.option("--dest", required=True, type=click.Path(file_okay=False))
@click.option("--dim", default=64, show_default=True, type=int)
@click.option("--seed", default=2024, show_default=True, type=int)
def make_dev_weights_cmd(dest, dim, seed):
    """Generate seeded small_conv bundles for local development."""
    from .weights import make_dev_weights

    for modality, path in make_dev_weights(dest, dim=dim, seed=seed).items():
        click.echo(f"{modality}: {path}")


def main() -> int:
    try:
        cli.main(standalone_mode=False)
        return 0
    except click.UsageError as exc:
        exc.show(file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 1


if __name__ == "__main__":
    sys.exit(main())
