import csv
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Iterable, List, Optional, Sequence

from jinja2 import Template

from core.config import get_settings
from core.units import angular_to_mhz
from schemas.experiment import DerivedReport

logger = logging.getLogger(__name__)

DERIVED_TEMPLATE = Template(
    """{% for label, value, unit in rows -%}
{{ label.ljust(width) }} = {{ value }}{% if unit %} {{ unit }}{% endif %}
{% endfor -%}
{% if report.antibunching_window_discrepancy -%}
note: computed antibunching window 2 R_sa / v = {{ "%.3g"|format(report.antibunching_window_ns) }} ns differs from the quoted {{ report.quoted_antibunching_window_ns }} ns
{% endif -%}
"""
)


def format_value(value: Optional[float], digits: Optional[int] = None) -> str:
    """Locale-independent fixed significant-digit formatting; None is empty."""
    if value is None:
        return ""
    digits = digits or get_settings().CSV_SIGNIFICANT_DIGITS
    return format(float(value), f".{digits}g")


def _atomic_write(path: Path, write) -> Path:
    """Write through a temporary file in the target directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            write(handle)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.remove(tmp_name)
        raise
    logger.info(f"Wrote {path}")
    return path


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    """CSV with floats at fixed significant digits; partial files never remain."""
    def write(handle):
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(v) if isinstance(v, float) or v is None else v for v in row])
    return _atomic_write(path, write)


def write_text(path: Path, text: str) -> Path:
    return _atomic_write(path, lambda handle: handle.write(text))


def derived_rows(report: DerivedReport) -> List[tuple]:
    rows = [
        ("R_sa", f"{report.r_sa:.3g}", "μm"),
        ("V_sa", f"{report.v_sa * 1e-9:.3g}", "mm^3"),
        ("rho_sa", f"{report.rho_sa * 1e9:.3g}", "mm^-3"),
        ("rho_mean", f"{report.rho_mean * 1e9:.3g}", "mm^-3"),
        ("n_sa", f"{report.n_sa_mean:.3g}", ""),
        ("kappa_mean", f"{report.kappa_mean * 1e3:.4g}", "mm^-1"),
        ("w/2pi", f"{angular_to_mhz(report.eit_halfwidth):.4g}", "MHz"),
        ("v", f"{report.group_velocity_m_s:.3g}", "m/s"),
        ("I_p_max", f"{report.saturation_intensity:.4g}", "rad^2/s^2"),
        ("Omega_p_max/2pi", f"{report.saturation_rabi_mhz:.3g}", "MHz"),
        ("dt", f"{report.antibunching_window_ns:.3g}", "ns"),
    ]
    for omega_mhz, rho_phot in report.photon_density_at_inputs:
        rows.append((f"rho_phot({omega_mhz:g} MHz)", f"{rho_phot * 1e9:.3g}", "mm^-3"))
    return rows


def render_derived(report: DerivedReport) -> str:
    rows = derived_rows(report)
    width = max(len(label) for label, _, _ in rows)
    return DERIVED_TEMPLATE.render(rows=rows, width=width, report=report)


def write_json(path: Path, payload: Any) -> Path:
    return _atomic_write(path, lambda handle: json.dump(payload, handle, indent=2, sort_keys=True))
