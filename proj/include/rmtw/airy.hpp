#pragma once

namespace rmtw {

/// Airy function of the first kind and its derivative.  Maclaurin series in
/// extended precision for |x| <= 9, asymptotic expansions beyond (decaying
/// form for x > 9, oscillatory form for x < -9); absolute accuracy better
/// than 1e-12 on [-40, 120].
double airy_ai(double x);
double airy_ai_prime(double x);

/// Airy kernel Ai(x,y) = int_0^inf Ai(x+u) Ai(y+u) du evaluated through the
/// closed form (Ai(x)Ai'(y) - Ai'(x)Ai(y)) / (x - y) with the diagonal
/// limit Ai'(x)^2 - x Ai(x)^2.
double airy_kernel(double x, double y);

}  // namespace rmtw
