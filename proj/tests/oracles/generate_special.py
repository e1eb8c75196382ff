"""Regenerates special_values.inc with mpmath at 40 digits."""
import mpmath as mp

mp.mp.dps = 40

kummer = [(0.5, 1.5, 0.3), (1.5, 2.5, 10.0), (3.5, 1.5, 50.0), (0.5, 0.5, 120.0), (6.5, 1.5, 180.0),
          (2.0, 3.0, -2.0)]
tricomi = [(0.5, 0.5, 2.0), (1.5, 0.5, 0.1), (5.5, 1.5, 30.0), (12.5, 0.5, 200.0), (0.5, 1.5, 1e-3),
           (30.5, 0.5, 5.0)]
s_params = [(0, -1.0, 1.0), (2, -3.16, 0.8), (5, -6.3, 0.25), (10, -20.0, 2.0), (0, 0.0, 1.0),
            (4, 0.0, 0.3), (3, 3.16, 1.0), (8, 6.3, 0.5), (12, 40.0, 2.0), (6, 60.0, 1.0),
            (22, -4.47, 0.05), (1, -0.01, 3.0)]
erfcx = [-2.0, -0.3, 0.0, 0.2, 0.5, 1.0, 4.0, 5.5, 10.0, 100.0]


def s_integral(a, b, g):
    peak = max(b / (2 * g), 1)
    w = 1 / mp.sqrt(g)
    return mp.quad(lambda x: x**a * mp.exp(b * x - g * x * x), [0, peak / 2, peak, peak + 5 * w, peak + 20 * w, mp.inf])


lines = ["// Generated by generate_special.py (mpmath, 40 digits).", ""]
lines.append("struct KummerCase { double a, b, x, value; };")
lines.append("inline constexpr KummerCase kKummerCases[] = {")
lines += ["    {%r, %r, %r, %s}," % (a, b, x, mp.nstr(mp.hyp1f1(a, b, x), 20)) for a, b, x in kummer]
lines.append("};")
lines.append("struct TricomiCase { double a, b, x, value; };")
lines.append("inline constexpr TricomiCase kTricomiCases[] = {")
lines += ["    {%r, %r, %r, %s}," % (a, b, x, mp.nstr(mp.hyperu(a, b, x), 20)) for a, b, x in tricomi]
lines.append("};")
lines.append("struct SCase { int alpha; double beta, gamma, log_value; };")
lines.append("inline constexpr SCase kSCases[] = {")
lines += ["    {%d, %r, %r, %s}," % (a, b, g, mp.nstr(mp.log(s_integral(a, b, g)), 20)) for a, b, g in s_params]
lines.append("};")
lines.append("struct ErfcxCase { double x, value; };")
lines.append("inline constexpr ErfcxCase kErfcxCases[] = {")
lines += ["    {%r, %s}," % (x, mp.nstr(mp.exp(mp.mpf(x) ** 2) * mp.erfc(x), 20)) for x in erfcx]
lines.append("};")

with open(__file__.replace("generate_special.py", "special_values.inc"), "w") as f:
    f.write("\n".join(lines) + "\n")
