"""Color palette for CLI reports."""

from rich.theme import Theme

COLORS = {
    "slate": "#5B7083",
    "lime": "#9BC53D",
    "signal": "#E4572E",
    "steel": "#4A90A4",
    "sand": "#E8E0D4",
    "muted": "#8B8B8B",
    "gold": "#F2C14E",
}

THEME = Theme(
    {
        "ok": f"bold {COLORS['lime']}",
        "err": f"bold {COLORS['signal']}",
        "dim": COLORS["muted"],
        "accent": COLORS["gold"],
        "panel": COLORS["steel"],
        "value": COLORS["sand"],
    }
)
