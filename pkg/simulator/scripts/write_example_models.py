"""
Script to regenerate sample_models/*.json from the preset registry
"""
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from app.config_presets import PRESET_MODELS  # noqa: E402

if __name__ == "__main__":
    target = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "sample_models"
    target.mkdir(parents=True, exist_ok=True)

    for name, model_file in sorted(PRESET_MODELS.items()):
        path = target / f"{name}.json"
        path.write_text(model_file.model_dump_json(indent=2, exclude_none=True) + "\n", encoding="utf-8")
        print(f"wrote {path}")
