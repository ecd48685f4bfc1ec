"""Arrival times, profile reconstruction and profile checks."""
from engine.profile.quadrature import TailExponent, time_to_one, time_to_zero
from engine.profile.reconstruct import WaveProfile, reconstruct
from engine.profile.verify import ProfileCheck, VerificationReport, verify_profile

__all__ = [
    "ProfileCheck",
    "TailExponent",
    "VerificationReport",
    "WaveProfile",
    "reconstruct",
    "time_to_one",
    "time_to_zero",
    "verify_profile",
]
