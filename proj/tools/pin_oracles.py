"""Regenerates tests/pinned_oracles.hpp from 256-bit mpmath products.

These values are the frozen references for the Fourier tests; they are
computed independently of the C++ library.
"""
import mpmath as mp

mp.mp.prec = 256


def bernoulli_hat(lam, xi):
    # prod_{n>=0} cos(lam^n xi), stopped once the factors are 1 to working precision
    out = mp.mpf(1)
    x = mp.mpf(xi)
    while abs(x) > mp.mpf(10) ** -40:
        out *= mp.cos(x)
        x *= lam
    return out


def fmt(x):
    return mp.nstr(x, 30)


phi = (1 + mp.sqrt(5)) / 2
lines = ["#pragma once", "", "// Generated by tools/pin_oracles.py (mpmath, 256-bit). Do not edit.", "",
         "namespace pinned {", ""]

golden = [bernoulli_hat(1 / phi, 2 * mp.pi * phi ** (4 + n)) for n in range(26)]
lines.append("// mu_hat(2 pi phi^(4+n)) for the maps t/phi +- 1, n = 0..25")
lines.append("inline constexpr double kGoldenWitness[26] = {")
lines += ["    %s," % fmt(v) for v in golden]
lines.append("};")
lines.append("inline constexpr double kGoldenWitnessMin = %s;" % fmt(min(abs(v) for v in golden)))
lines.append("")

salem = [bernoulli_hat(mp.mpf(2) / 5, 2 * mp.pi * (mp.mpf(5) / 2) ** n) for n in range(26)]
lines.append("// mu_hat(2 pi 2.5^n) for the maps 2t/5 +- 1, n = 0..25")
lines.append("inline constexpr double kFortyPercent[26] = {")
lines += ["    %s," % fmt(v) for v in salem]
lines.append("};")
lines.append("")

lines.append("// mu_hat(2 pi phi^5), contraction 1/phi")
lines.append("inline constexpr double kGoldenAtPhi5 = %s;" % fmt(bernoulli_hat(1 / phi, 2 * mp.pi * phi ** 5)))
lines.append("")
lines.append("// mu_hat(xi) for contraction 0.3 at xi = 1, 7.5, -42.25")
lines.append("inline constexpr double kPointThree[3] = {%s};" %
             ", ".join(fmt(bernoulli_hat(mp.mpf(3) / 10, x)) for x in (1, mp.mpf(7.5), mp.mpf(-42.25))))
lines.append("")

lucas = [2, 1]
while len(lucas) <= 60:
    lucas.append(lucas[-1] + lucas[-2])
lines.append("// Lucas numbers L_0..L_60")
lines.append("inline constexpr long long kLucas[61] = {")
lines += ["    %dLL," % v for v in lucas]
lines.append("};")
lines.append("")
lines.append("}  // namespace pinned")
print("\n".join(lines))
