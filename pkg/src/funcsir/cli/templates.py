"""Console reports, rendered from jinja2 templates."""

from typing import Any

from jinja2 import Environment, StrictUndefined

__all__ = ["render"]

_env = Environment(undefined=StrictUndefined, trim_blocks=True, lstrip_blocks=True)
_env.filters["g"] = lambda value, digits=6: f"{value:.{digits}g}"

TEMPLATES = {
    "simulate": """\
simulated {{ config.model }}: n={{ n }}, J={{ J }}, seed={{ config.seed }}
data: {{ data_path }}
true indices: {{ xi_path }}
config: {{ config_json }}
""",
    "fit": """\
fit k={{ fit.k }}{% if fit.k_effective != fit.k %} (effective {{ fit.k_effective }}){% endif %}, S={{ fit.S }}, p={{ fit.p }}, n={{ n }}, J={{ fit.J }}
  j  eigenvalue(R)   cumulative
{% for row in covariance %}
{{ "%3d"|format(row.j) }}  {{ "%-14s"|format(row.value|g) }}  {{ "%.4f"|format(row.cumulative) }}
{% endfor %}
SIR eigenvalues: {% for v in sir %}{{ v|g(4) }}{% if not loop.last %}, {% endif %}{% endfor %}

{% for note in fit.notes %}
note: {{ note }}
{% endfor %}
written to {{ out }}
""",
    "cv": """\
cross-validation ({{ report.scheme }}, seed {{ report.seed }}, {{ report.link }} link, {{ report.n_folds }} folds{% if report.folds_skipped %}, {{ report.folds_skipped }} skipped{% endif %})
  k  CV(k)          se
{% for row in rows %}
{{ "%3d"|format(row.k) }}  {{ "%-14s"|format(row.cv|g) }} {{ row.se|g(3) }}{% if row.note %}  {{ row.note }}{% endif %}

{% endfor %}
k_star = {{ report.k_star }}{% if not report.significant %} (no candidate is significantly worse){% endif %}

{% if out %}
written to {{ out }}
{% endif %}
""",
    "predict": """\
predicted {{ q }} responses with k={{ fit.k }}, p={{ fit.p }}
{% if rmse is not none %}
prediction error (RMSE): {{ rmse|g(8) }}
{% endif %}
{% if out %}
written to {{ out }}
{% endif %}
""",
    "diagnose": """\
diagnostics: J={{ report.J }}, suggested rank {{ report.suggested_rank }} (99% of variation)
  k  residual_trace  eigengap/J
{% for row in rows %}
{{ "%3d"|format(row.k) }}  {{ "%-14s"|format(row.trace|g) }}  {{ row.gap|g }}
{% endfor %}
{% if report.scaling is not none %}
  j  lambda_j/J     brownian       rel_error
{% for row in scaling %}
{{ "%3d"|format(row.j) }}  {{ "%-14s"|format(row.scaled|g) }} {{ "%-14s"|format(row.brownian|g) }} {{ row.rel_error|g(3) }}
{% endfor %}
{% endif %}
{% if out %}
written to {{ out }}
{% endif %}
""",
}


def render(name: str, **context: Any) -> str:
    return _env.from_string(TEMPLATES[name]).render(**context)
