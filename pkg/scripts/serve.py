#!/usr/bin/env python3
"""Run the HTTP service, serving the built frontend when present.

    python3 scripts/serve.py [--host 127.0.0.1] [--port 8000]
"""

import argparse
import os
import sys

import uvicorn

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from refspect.service import create_app  # noqa: E402


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8000)
    parser.add_argument(
        "--static",
        default=os.path.join(os.path.dirname(__file__), "..", "frontend", "dist"),
        help="directory with the built frontend (skipped when absent)",
    )
    args = parser.parse_args()
    static = args.static if os.path.isdir(args.static) else None
    if static is None:
        print("frontend bundle not found; serving the API only", file=sys.stderr)
    uvicorn.run(create_app(static_dir=static), host=args.host, port=args.port)


if __name__ == "__main__":
    main()
