"""Minimal wave speed: analytic bracket, shooting and sign tests."""
from engine.wavespeed.bounds import SpeedBounds, necessary_condition, speed_bounds
from engine.wavespeed.estimates import (
    Sign,
    StimaVerdict,
    lower_solution_from_stima,
    sign_at_one,
    sign_at_zero,
    stima_test,
)
from engine.wavespeed.shooting import WaveSpeedEstimate, cstar, is_threshold, solution_at

__all__ = [
    "Sign",
    "SpeedBounds",
    "StimaVerdict",
    "WaveSpeedEstimate",
    "cstar",
    "is_threshold",
    "lower_solution_from_stima",
    "necessary_condition",
    "sign_at_one",
    "sign_at_zero",
    "solution_at",
    "speed_bounds",
    "stima_test",
]
