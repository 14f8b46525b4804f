# scripts/export_tables.py
"""Write the degree table to data/processed. Run: python scripts/export_tables.py [max_n]"""
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.core.degrees import table2_csv, table2_json  # noqa: E402
from src.utils.logger import logger  # noqa: E402

OUT_DIR = "data/processed"


def export_table2(max_n: int, out_dir: str = OUT_DIR):
    """Write table2.csv and table2.json for 0..max_n."""
    os.makedirs(out_dir, exist_ok=True)
    try:
        with open(os.path.join(out_dir, "table2.csv"), "w", encoding="utf-8", newline="") as f:
            f.write(table2_csv(max_n))
        with open(os.path.join(out_dir, "table2.json"), "w", encoding="utf-8") as f:
            f.write(table2_json(max_n) + "\n")
        logger.info(f"Exported degree table up to n={max_n} to {out_dir}")
    except ValueError as e:
        logger.error(f"Error exporting degree table: {e}")
        raise


if __name__ == "__main__":
    export_table2(int(sys.argv[1]) if len(sys.argv) > 1 else 10)
