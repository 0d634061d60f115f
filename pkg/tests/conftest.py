import mpmath as mp

# Test-side arithmetic (expected values, oracle comparisons) runs at least as
# precisely as the library's working precision, so comparisons are never
# limited by the ambient mpmath default.
mp.mp.dps = 40
