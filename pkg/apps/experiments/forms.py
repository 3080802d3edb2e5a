"""
Django form that validates command-line flags into an ExperimentSpec.
"""

# Import future annotations for forward references.
from __future__ import annotations

# Imported for flag validation.
from django import forms
# Experiment defaults live in settings.
from django.conf import settings

# Domain entities built from the cleaned flags.
from apps.core.entities.experiment import (
    Algorithm,
    ConversionConfig,
    EdgePolicy,
    ExperimentSpec,
    KernelSupport,
    ToneSpec,
)
from apps.core.exceptions import NaturalPwmError


def _int_list(text: str, label: str) -> tuple[int, ...]:
    try:
        values = tuple(int(part) for part in str(text).split(",") if part.strip())
    except ValueError:
        raise forms.ValidationError(f"{label} must be a comma-separated list of integers.")
    if not values:
        raise forms.ValidationError(f"{label} must not be empty.")
    return values


def setting_defaults(command: str = "run_convert") -> dict:
    """
    Flag defaults for a command; run_fig5 sweeps K = 1..4 with periodic
    edges so the coherent tone stays periodic over the analysed block.
    """
    defaults = {
        "f1": settings.NATPWM_F1,
        "lup": settings.NATPWM_LUP,
        "k_terms": ",".join(str(k) for k in settings.NATPWM_K_TERMS),
        "algorithm": Algorithm.COMBINED.value,
        "cutoff": settings.NATPWM_CUTOFF_HZ,
        "out": settings.NATPWM_OUTPUT_DIR,
        "half_window": settings.NATPWM_HALF_WINDOW,
        "harmonics": ",".join(str(h) for h in settings.NATPWM_HARMONICS),
        "normalize_dc": settings.NATPWM_NORMALIZE_DC,
        "kernel_support": settings.NATPWM_KERNEL_SUPPORT,
        "edge_policy": settings.NATPWM_EDGE_POLICY,
        "oversample": settings.NATPWM_OVERSAMPLE,
        "wav": False,
        "pwm_csv": False,
    }
    if command == "run_fig5":
        defaults["k_terms"] = "1,2,3,4"
        defaults["edge_policy"] = EdgePolicy.PERIODIC.value
    return defaults


# Experiment form used by run_convert and run_fig5.
# Flags left unset fall back to the NATPWM_* settings.
class ExperimentSpecForm(forms.Form):
    """
    Validates flags and builds the ExperimentSpec via to_spec().
    """

    # ---------- form fields ----------
    # One field per command-line flag
    # ---------- form fields ----------
    f1 = forms.FloatField(min_value=1.0)
    lup = forms.IntegerField(min_value=2)
    k_terms = forms.CharField()
    algorithm = forms.ChoiceField(choices=[(a.value, a.value) for a in Algorithm])
    tone = forms.CharField(required=False)
    input = forms.CharField(required=False)
    bits = forms.IntegerField(required=False, min_value=4, max_value=16)
    cutoff = forms.FloatField(min_value=0.0)
    out = forms.CharField()
    half_window = forms.IntegerField(min_value=1)
    harmonics = forms.CharField()
    normalize_dc = forms.BooleanField(required=False)
    kernel_support = forms.ChoiceField(choices=[(s.value, s.value) for s in KernelSupport])
    edge_policy = forms.ChoiceField(choices=[(e.value, e.value) for e in EdgePolicy])
    oversample = forms.IntegerField(min_value=1)
    wav = forms.BooleanField(required=False)
    pwm_csv = forms.BooleanField(required=False)

    def __init__(self, data: dict | None = None, *, command: str = "run_convert", **kwargs):
        merged = setting_defaults(command)
        # unset flags (None, "" or a store_true left False) keep the settings default
        merged.update({k: v for k, v in (data or {}).items() if v is not None and v != "" and v is not False})
        self.command = command
        super().__init__(merged, **kwargs)
        self._spec: ExperimentSpec | None = None

    # ---------- field validation ----------

    def clean_k_terms(self) -> tuple[int, ...]:
        return _int_list(self.cleaned_data["k_terms"], "K")

    def clean_harmonics(self) -> tuple[int, ...]:
        return _int_list(self.cleaned_data["harmonics"], "Harmonic orders")

    def clean_tone(self) -> ToneSpec | None:
        text = self.cleaned_data.get("tone")
        if not text:
            return None
        try:
            return ToneSpec.parse(text)
        except NaturalPwmError as exc:
            raise forms.ValidationError(str(exc))

    # ---------- cross-field validation ----------
    # Exactly one source; ExperimentSpec's own checks surface as form errors
    # ---------- cross-field validation ----------
    def clean(self):
        cleaned = super().clean()
        if self.errors:
            return cleaned
        tone, path = cleaned.get("tone"), cleaned.get("input")
        if tone is not None and path:
            raise forms.ValidationError("Give either --tone or --input, not both.")
        if tone is None and not path:
            tone = ToneSpec.parse(settings.NATPWM_TONE)
        try:
            conversion = ConversionConfig(
                upsampling_factor=cleaned["lup"],
                k_terms=cleaned["k_terms"][0],
                half_window=cleaned["half_window"],
                kernel_support=cleaned["kernel_support"],
                edge_policy=cleaned["edge_policy"],
                normalize_dc=cleaned["normalize_dc"],
            )
            self._spec = ExperimentSpec(
                input_rate=cleaned["f1"],
                conversion=conversion,
                algorithm=cleaned["algorithm"],
                k_values=cleaned["k_terms"],
                cutoff_hz=cleaned["cutoff"],
                output_dir=cleaned["out"],
                tone=tone,
                input_path=path or None,
                bits=cleaned.get("bits"),
                harmonic_orders=cleaned["harmonics"],
                oversample=cleaned["oversample"],
                export_wav=cleaned["wav"],
                export_pwm_csv=cleaned["pwm_csv"],
            )
        except NaturalPwmError as exc:
            raise forms.ValidationError(str(exc))
        return cleaned

    def to_spec(self) -> ExperimentSpec:
        if not self.is_valid():
            raise ValueError("form is not valid")
        return self._spec

    def error_message(self) -> str:
        parts = []
        for field, errors in self.errors.get_json_data().items():
            label = "form" if field == "__all__" else f"--{field.replace('_', '-')}"
            parts.extend(f"{label}: {error['message']}" for error in errors)
        return "; ".join(parts)
