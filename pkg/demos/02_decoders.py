"""The three decoders side by side.

Top-k correlation is the fast one: score every column by its inner
product with the output, keep the k best.  Exhaustive maximum likelihood
is the slow oracle it is judged against.  And for the noiseless linear
channel there is a party trick: one dyadic measurement holds the whole
signal in its binary digits.
"""

import math

import numpy as np

from binsense import (
    Linear,
    OneBit,
    RngStream,
    SparseSignal,
    decimal_decode,
    decimal_encode,
    decimal_row,
    gen_sensing_matrix,
    measure,
    mle_decode_linear,
    quantize_then_decode,
    random_signal,
    topk_correlation_decode,
)

n, k, m, sigma2 = 24, 3, 60, 1.0
x = random_signal(n, k, RngStream(11, 0))
A = gen_sensing_matrix(m, n, RngStream(11, 1))
y = measure(A, x, Linear(sigma2), RngStream(11, 2))
print(f"instance: n={n}, k={k}, m={m}, sigma2={sigma2}, truth={x.support}")

top = topk_correlation_decode(A, y, k)
print(f"top-k correlation:  {[int(i) for i in top.support]}  "
      f"(scores at truth: {np.round(top.scores[x.support_array], 1)})")

mle = mle_decode_linear(A, y, k)
print(f"exhaustive MLE:     {[int(i) for i in mle.support]}  "
      f"(searched C({n},{k}) = {math.comb(n, k)} supports)")

quant = quantize_then_decode(A, y, k)
print(f"sign-then-top-k:    {[int(i) for i in quant.support]}")

ybit = measure(A, x, OneBit(sigma2), RngStream(11, 2))
bit = topk_correlation_decode(A, ybit, k)
print(f"top-k on one-bit:   {[int(i) for i in bit.support]}  (same noise stream, same answer)")

# the single-measurement construction for the noiseless channel
print("\nnoiseless single measurement:")
xs = SparseSignal(12, (0, 4, 9))
row = decimal_row(12)
y_one = measure(row, xs, Linear(0.0), RngStream(0)).values[0]
print(f"  design row = [1, 2, 4, ...]/2^12, signal support {xs.support}")
print(f"  the one measurement: y = {y_one}  (2^12 y = {y_one * 4096:.0f})")
print(f"  encode agrees: {decimal_encode(xs)}")
print(f"  decoded support: {[int(i) for i in decimal_decode(y_one, 12)]}")
