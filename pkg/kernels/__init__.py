"""
スカラー・行列値カーネル
"""
from .scalar import (
    gaussian_scalar,
    gaussian_odd_scalar,
    gaussian_even_scalar,
    check_sigma,
)
from .matrix import (
    separable_gaussian,
    curl_free,
    symplectic,
    odd_curl_free,
    odd_symplectic,
    even_curl_free,
    even_symplectic,
    evaluate_kernel,
    kernel_blocks,
    generator_gradients,
    KERNELS,
)

__all__ = [
    'gaussian_scalar',
    'gaussian_odd_scalar',
    'gaussian_even_scalar',
    'check_sigma',
    'separable_gaussian',
    'curl_free',
    'symplectic',
    'odd_curl_free',
    'odd_symplectic',
    'even_curl_free',
    'even_symplectic',
    'evaluate_kernel',
    'kernel_blocks',
    'generator_gradients',
    'KERNELS',
]
