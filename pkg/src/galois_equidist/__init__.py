"""Heights, generalized degrees and equidistribution checks for Galois orbits in (Qbar^x)^N."""

from .discrepancy import (
    DiscrepancyReport,
    PointData,
    analyze_point,
    frl_bound_1d,
    nu_hat_bound_check,
    orbit_average,
    sweep_family,
    theorem_main,
)
from .functions import TestFunction, function_from_dict, load_function
from .gendeg import GenDegReport, degree_search_table, generalized_degree
from .harmonic import c_of_F, fourier_coeffs, fourier_stieltjes, pair_spectra
from .heights import HeightReport, mahler_measure_quadrature, mahler_measure_roots, point_height
from .mollifier import lipschitz_bound, optimize_delta, rho, rho_prime
from .orbits import AlgebraicPointSpec, GaloisOrbit, enumerate_orbit, load_point, monomial_image
from .polynomial import IntPolynomial, RatPolynomial, cyclotomic
from .roots import ComplexRootSet, find_roots

__version__ = "0.1.0"

__all__ = [
    "AlgebraicPointSpec",
    "ComplexRootSet",
    "DiscrepancyReport",
    "GaloisOrbit",
    "GenDegReport",
    "HeightReport",
    "IntPolynomial",
    "PointData",
    "RatPolynomial",
    "TestFunction",
    "analyze_point",
    "c_of_F",
    "cyclotomic",
    "degree_search_table",
    "enumerate_orbit",
    "find_roots",
    "fourier_coeffs",
    "fourier_stieltjes",
    "frl_bound_1d",
    "function_from_dict",
    "generalized_degree",
    "lipschitz_bound",
    "load_function",
    "load_point",
    "mahler_measure_quadrature",
    "mahler_measure_roots",
    "monomial_image",
    "nu_hat_bound_check",
    "optimize_delta",
    "orbit_average",
    "pair_spectra",
    "point_height",
    "rho",
    "rho_prime",
    "sweep_family",
    "theorem_main",
]
