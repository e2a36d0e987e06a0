"""Run the service: python -m modelserver [--config registry.yaml] [--port N]."""

import argparse

import uvicorn

from .registry import default_registry, load_registry
from .service import create_app


def main():
    parser = argparse.ArgumentParser(prog="modelserver")
    parser.add_argument("--config", help="YAML registry config")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8752)
    args = parser.parse_args()

    registry = load_registry(args.config) if args.config else default_registry()
    uvicorn.run(create_app(registry), host=args.host, port=args.port)


if __name__ == "__main__":
    main()
