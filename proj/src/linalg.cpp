#include "pw/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pw {

namespace {

constexpr double kDeflateEps = 1e-15;

// G = [c s; -s c] with G^T (a, b) = (r, 0)
void givens(double a, double b, double& c, double& s) {
  if (b == 0.0) {
    c = 1.0;
    s = 0.0;
  } else if (std::abs(b) > std::abs(a)) {
    const double t = -a / b;
    s = 1.0 / std::sqrt(1.0 + t * t);
    c = s * t;
  } else {
    const double t = -b / a;
    c = 1.0 / std::sqrt(1.0 + t * t);
    s = c * t;
  }
}

// T <- G^T T G and V <- V G for the rotation acting on indices (k, k+1).
void apply_sym_rotation(SmallMat& T, SmallMat& V, int k, double c, double s) {
  const int n = static_cast<int>(T.rows());
  for (int j = 0; j < n; ++j) {
    const double a = T(k, j), b = T(k + 1, j);
    T(k, j) = c * a - s * b;
    T(k + 1, j) = s * a + c * b;
  }
  for (int i = 0; i < n; ++i) {
    const double a = T(i, k), b = T(i, k + 1);
    T(i, k) = c * a - s * b;
    T(i, k + 1) = s * a + c * b;
  }
  for (int i = 0; i < n; ++i) {
    const double a = V(i, k), b = V(i, k + 1);
    V(i, k) = c * a - s * b;
    V(i, k + 1) = s * a + c * b;
  }
}

template <typename M>
double norm_inf(const M& A) {
  double best = 0.0;
  for (int i = 0; i < A.rows(); ++i) {
    double row = 0.0;
    for (int j = 0; j < A.cols(); ++j) row += std::abs(A(i, j));
    best = std::max(best, row);
  }
  return best;
}

template <typename Mat, typename Vec>
Vec solve_lu_impl(const Mat& Ain, const Vec& bin) {
  const int n = static_cast<int>(Ain.rows());
  if (Ain.cols() != n || bin.size() != n) throw std::invalid_argument("solve_lu: dimension mismatch");
  if (n > kMaxDim) throw std::invalid_argument("solve_lu: n exceeds 16");
  Mat A = Ain;
  Vec b = bin;
  const double scale = norm_inf(Ain);
  const double tiny = 1e-14 * scale;
  for (int k = 0; k < n; ++k) {
    int p = k;
    double best = std::abs(A(k, k));
    for (int i = k + 1; i < n; ++i) {
      if (std::abs(A(i, k)) > best) {
        best = std::abs(A(i, k));
        p = i;
      }
    }
    if (best <= tiny || best == 0.0) {
      throw SingularMatrixError("solve_lu: singular system at row " + std::to_string(k), k);
    }
    if (p != k) {
      A.row(p).swap(A.row(k));
      std::swap(b(p), b(k));
    }
    for (int i = k + 1; i < n; ++i) {
      const auto f = A(i, k) / A(k, k);
      A(i, k) = 0.0;
      for (int j = k + 1; j < n; ++j) A(i, j) -= f * A(k, j);
      b(i) -= f * b(k);
    }
  }
  Vec x(n);
  for (int i = n - 1; i >= 0; --i) {
    auto acc = b(i);
    for (int j = i + 1; j < n; ++j) acc -= A(i, j) * x(j);
    x(i) = acc / A(i, i);
  }
  return x;
}

}  // namespace

SymEigen sym_eigen(const SmallMat& S) {
  const int n = static_cast<int>(S.rows());
  if (S.cols() != n) throw std::invalid_argument("sym_eigen: matrix not square");
  const double snorm = norm_inf(S);
  if (norm_inf(SmallMat(S - S.transpose())) > 1e-12 * snorm) {
    throw std::invalid_argument("sym_eigen: matrix not symmetric");
  }

  SmallMat T = S;
  SmallMat V = SmallMat::Identity(n, n);

  // Householder reduction to tridiagonal form, T <- H T H, V <- V H.
  for (int k = 0; k + 2 < n; ++k) {
    const int m = n - k - 1;
    SmallVec v = T.block(k + 1, k, m, 1);
    const double xn = v.norm();
    if (xn == 0.0) continue;
    const double alpha = v(0) >= 0.0 ? -xn : xn;
    v(0) -= alpha;
    const double vn = v.norm();
    if (vn == 0.0) continue;
    v /= vn;
    // rows k+1.., all columns
    for (int j = 0; j < n; ++j) {
      double dot = 0.0;
      for (int i = 0; i < m; ++i) dot += v(i) * T(k + 1 + i, j);
      for (int i = 0; i < m; ++i) T(k + 1 + i, j) -= 2.0 * v(i) * dot;
    }
    for (int i = 0; i < n; ++i) {
      double dot = 0.0;
      for (int j = 0; j < m; ++j) dot += T(i, k + 1 + j) * v(j);
      for (int j = 0; j < m; ++j) T(i, k + 1 + j) -= 2.0 * dot * v(j);
    }
    for (int i = 0; i < n; ++i) {
      double dot = 0.0;
      for (int j = 0; j < m; ++j) dot += V(i, k + 1 + j) * v(j);
      for (int j = 0; j < m; ++j) V(i, k + 1 + j) -= 2.0 * dot * v(j);
    }
  }
  // Clean numerical fill outside the tridiagonal band.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (std::abs(i - j) > 1) T(i, j) = 0.0;

  const double floor_abs = 1e-30 * std::max(snorm, std::numeric_limits<double>::min());
  int hi = n - 1;
  int iter = 0;
  while (hi > 0) {
    for (int k = 0; k < hi; ++k) {
      const double e = std::abs(T(k + 1, k));
      if (e <= kDeflateEps * (std::abs(T(k, k)) + std::abs(T(k + 1, k + 1))) || e <= floor_abs) {
        T(k + 1, k) = T(k, k + 1) = 0.0;
      }
    }
    while (hi > 0 && T(hi, hi - 1) == 0.0) --hi;
    if (hi == 0) break;
    int lo = hi - 1;
    while (lo > 0 && T(lo, lo - 1) != 0.0) --lo;

    if (++iter > 30 * n) throw NonConvergenceError("sym_eigen: QR iteration did not converge");

    const double dd = 0.5 * (T(hi - 1, hi - 1) - T(hi, hi));
    const double ee = T(hi, hi - 1);
    const double denom = dd + std::copysign(std::hypot(dd, ee), dd);
    const double mu = T(hi, hi) - (denom != 0.0 ? ee * ee / denom : 0.0);
    double x = T(lo, lo) - mu;
    double z = T(lo + 1, lo);
    for (int k = lo; k < hi; ++k) {
      double c, s;
      givens(x, z, c, s);
      apply_sym_rotation(T, V, k, c, s);
      if (k + 1 < hi) {
        x = T(k + 1, k);
        z = T(k + 2, k);
      }
    }
  }

  SymEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  std::array<int, kMaxDim> order{};
  for (int i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.begin() + n, [&](int a, int b) { return T(a, a) < T(b, b); });
  for (int c = 0; c < n; ++c) {
    const int src = order[c];
    out.values(c) = T(src, src);
    int big = 0;
    for (int i = 1; i < n; ++i)
      if (std::abs(V(i, src)) > std::abs(V(big, src))) big = i;
    const double sgn = V(big, src) < 0.0 ? -1.0 : 1.0;
    for (int i = 0; i < n; ++i) out.vectors(i, c) = sgn * V(i, src);
  }
  return out;
}

SmallVec solve_lu(const SmallMat& A, const SmallVec& b) { return solve_lu_impl(A, b); }

SmallCVec solve_lu(const SmallCMat& A, const SmallCVec& b) { return solve_lu_impl(A, b); }

double cond_2norm(const SmallMat& A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("cond_2norm: matrix not square");
  const SmallMat AtA = A.transpose() * A;
  SmallMat sym = 0.5 * (AtA + AtA.transpose());
  const SymEigen ev = sym_eigen(sym);
  const double lo = ev.values(0);
  const double hi = ev.values(ev.values.size() - 1);
  if (lo <= 0.0 || hi <= 0.0) return std::numeric_limits<double>::infinity();
  return std::sqrt(hi / lo);
}

namespace {

// Unitary G = [c s; -conj(s) c] with G (a, b) = (r, 0), c real.
void cgivens(cplx a, cplx b, double& c, cplx& s) {
  const double aa = std::abs(a), bb = std::abs(b);
  if (bb == 0.0) {
    c = 1.0;
    s = 0.0;
    return;
  }
  if (aa == 0.0) {
    c = 0.0;
    s = std::conj(b) / bb;
    return;
  }
  const double r = std::hypot(aa, bb);
  c = aa / r;
  s = (a / aa) * std::conj(b) / r;
}

}  // namespace

ComplexEigen complex_eigen(const SmallCMat& Ain) {
  const int n = static_cast<int>(Ain.rows());
  if (Ain.cols() != n) throw std::invalid_argument("complex_eigen: matrix not square");
  if (n > 8) throw std::invalid_argument("complex_eigen: n exceeds 8");
  SmallCMat H = Ain;

  // Balancing by powers of two (no permutations).
  SmallVec scale = SmallVec::Ones(n);
  bool changed = true;
  for (int sweep = 0; changed && sweep < 100; ++sweep) {
    changed = false;
    for (int i = 0; i < n; ++i) {
      double c = 0.0, r = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(H(j, i));
        r += std::abs(H(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double f = 1.0;
      const double s = c + r;
      while (c < r / 2.0) {
        c *= 2.0;
        r /= 2.0;
        f *= 2.0;
      }
      while (c >= r * 2.0) {
        c /= 2.0;
        r *= 2.0;
        f /= 2.0;
      }
      if ((c + r) < 0.95 * s) {
        changed = true;
        scale(i) *= f;
        for (int j = 0; j < n; ++j) H(i, j) /= f;
        for (int j = 0; j < n; ++j) H(j, i) *= f;
      }
    }
  }

  // Householder reduction to upper Hessenberg: H <- P^H H P, Z <- Z P.
  SmallCMat Z = SmallCMat::Identity(n, n);
  for (int k = 0; k + 2 < n; ++k) {
    const int m = n - k - 1;
    SmallCVec v = H.block(k + 1, k, m, 1);
    const double xn = v.norm();
    if (xn == 0.0) continue;
    const cplx x0 = v(0);
    const cplx phase = std::abs(x0) == 0.0 ? cplx(1.0, 0.0) : x0 / std::abs(x0);
    const cplx alpha = -phase * xn;
    v(0) -= alpha;
    const double vn = v.norm();
    if (vn == 0.0) continue;
    v /= vn;
    // P = I - 2 v v^H on indices k+1..n-1
    for (int j = 0; j < n; ++j) {
      cplx dot = 0.0;
      for (int i = 0; i < m; ++i) dot += std::conj(v(i)) * H(k + 1 + i, j);
      for (int i = 0; i < m; ++i) H(k + 1 + i, j) -= 2.0 * v(i) * dot;
    }
    for (int i = 0; i < n; ++i) {
      cplx dot = 0.0;
      for (int j = 0; j < m; ++j) dot += H(i, k + 1 + j) * v(j);
      for (int j = 0; j < m; ++j) H(i, k + 1 + j) -= 2.0 * dot * std::conj(v(j));
    }
    for (int i = 0; i < n; ++i) {
      cplx dot = 0.0;
      for (int j = 0; j < m; ++j) dot += Z(i, k + 1 + j) * v(j);
      for (int j = 0; j < m; ++j) Z(i, k + 1 + j) -= 2.0 * dot * std::conj(v(j));
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j + 1 < i; ++j) H(i, j) = 0.0;

  // Shifted QR to triangular Schur form.
  double hnorm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) hnorm = std::max(hnorm, std::abs(H(i, j)));
  const double floor_abs = 1e-30 * std::max(hnorm, std::numeric_limits<double>::min());

  int hi = n - 1;
  int total_iter = 0;
  int local_iter = 0;
  std::array<double, 8> cs{};
  std::array<cplx, 8> ss{};
  while (hi > 0) {
    int lo = hi;
    while (lo > 0) {
      const double sub = std::abs(H(lo, lo - 1));
      if (sub <= kDeflateEps * (std::abs(H(lo - 1, lo - 1)) + std::abs(H(lo, lo))) || sub <= floor_abs) {
        H(lo, lo - 1) = 0.0;
        break;
      }
      --lo;
    }
    if (lo == hi) {
      --hi;
      local_iter = 0;
      continue;
    }
    if (++total_iter > 30 * n) throw NonConvergenceError("complex_eigen: QR iteration did not converge");
    ++local_iter;

    cplx mu;
    if (local_iter % 10 == 0) {
      mu = std::abs(H(hi, hi - 1).real()) + (hi >= 2 ? std::abs(H(hi - 1, hi - 2).real()) : 0.0);
    } else {
      const cplx a = H(hi - 1, hi - 1), b = H(hi - 1, hi), c = H(hi, hi - 1), d = H(hi, hi);
      const cplx half = 0.5 * (a - d);
      const cplx disc = std::sqrt(half * half + b * c);
      const cplx m1 = 0.5 * (a + d) + disc;
      const cplx m2 = 0.5 * (a + d) - disc;
      mu = std::abs(m1 - d) <= std::abs(m2 - d) ? m1 : m2;
    }

    for (int k = lo; k <= hi; ++k) H(k, k) -= mu;
    for (int k = lo; k < hi; ++k) {
      double c;
      cplx s;
      cgivens(H(k, k), H(k + 1, k), c, s);
      cs[k] = c;
      ss[k] = s;
      for (int j = k; j < n; ++j) {
        const cplx x = H(k, j), y = H(k + 1, j);
        H(k, j) = c * x + s * y;
        H(k + 1, j) = -std::conj(s) * x + c * y;
      }
      H(k + 1, k) = 0.0;
    }
    for (int k = lo; k < hi; ++k) {
      const double c = cs[k];
      const cplx s = ss[k];
      const int top = std::min(k + 2, hi);
      for (int i = 0; i <= top; ++i) {
        const cplx x = H(i, k), y = H(i, k + 1);
        H(i, k) = c * x + std::conj(s) * y;
        H(i, k + 1) = -s * x + c * y;
      }
      for (int i = 0; i < n; ++i) {
        const cplx x = Z(i, k), y = Z(i, k + 1);
        Z(i, k) = c * x + std::conj(s) * y;
        Z(i, k + 1) = -s * x + c * y;
      }
    }
    for (int k = lo; k <= hi; ++k) H(k, k) += mu;
  }

  ComplexEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  const double smallnum = std::max(hnorm, 1.0) * 1e-16;
  for (int k = 0; k < n; ++k) {
    const cplx lam = H(k, k);
    out.values(k) = lam;
    SmallCVec x = SmallCVec::Zero(n);
    x(k) = 1.0;
    for (int j = k - 1; j >= 0; --j) {
      cplx acc = 0.0;
      for (int m = j + 1; m <= k; ++m) acc += H(j, m) * x(m);
      cplx den = H(j, j) - lam;
      if (std::abs(den) < smallnum) den = smallnum;
      x(j) = -acc / den;
    }
    SmallCVec v = Z * x;
    for (int i = 0; i < n; ++i) v(i) *= scale(i);
    const double vn = v.norm();
    if (vn > 0.0) v /= vn;
    out.vectors.col(k) = v;
  }
  return out;
}

}  // namespace pw
