"""
city-viz-forge entry point.

Usage:
    python city_viz_forge.py make-fixtures --out fixtures
    python city_viz_forge.py pipeline fixtures/pedestrians.pipeline
    python city_viz_forge.py convert --model fixtures/city.gml --out model.nt
"""

import os
import sys

from dotenv import load_dotenv

# Add project root to path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

# Load environment variables
load_dotenv()

from src.cli import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
