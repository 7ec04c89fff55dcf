#include "sacma/testbed.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "sacma/errors.hpp"

namespace sacma {

namespace {

constexpr double kPi = 3.14159265358979323846;

double sqr(double v) { return v * v; }

Vec sub(const Vec& a, const Vec& b) {
  Vec out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

// pw[i] = 10^(c * i / (D-1)), i 0-based.
Vec ten_powers(double c, int dim) {
  Vec pw(dim);
  for (int i = 0; i < dim; ++i) pw[i] = std::pow(10.0, c * i / (dim - 1));
  return pw;
}

}  // namespace

double t_osz(double v) {
  if (v == 0.0) return 0.0;
  const double xhat = std::log(std::fabs(v));
  const double c1 = v > 0.0 ? 10.0 : 5.5;
  const double c2 = v > 0.0 ? 7.9 : 3.1;
  const double s = v > 0.0 ? 1.0 : -1.0;
  return s *
         std::exp(xhat + 0.049 * (std::sin(c1 * xhat) + std::sin(c2 * xhat)));
}

Vec t_osz(const Vec& x) {
  Vec out(x.size());
  for (size_t i = 0; i < x.size(); ++i) out[i] = t_osz(x[i]);
  return out;
}

Vec t_asy(const Vec& x, double beta) {
  const int d = int(x.size());
  Vec out(x.size());
  for (int i = 0; i < d; ++i) {
    if (x[i] > 0.0 && d > 1) {
      const double e = 1.0 + beta * (double(i) / (d - 1)) * std::sqrt(x[i]);
      out[i] = std::pow(x[i], e);
    } else {
      out[i] = x[i];
    }
  }
  return out;
}

Vec lambda_alpha(double alpha, int dim) {
  if (dim < 1) throw InvalidParam("lambda_alpha: dim must be >= 1");
  Vec d(dim);
  for (int i = 0; i < dim; ++i)
    d[i] = dim > 1 ? std::pow(alpha, 0.5 * i / (dim - 1)) : 1.0;
  return d;
}

double f_pen(const Vec& x) {
  double s = 0.0;
  for (double v : x) {
    const double e = std::fabs(v) - 5.0;
    if (e > 0.0) s += e * e;
  }
  return s;
}

TargetSet TargetSet::standard() {
  TargetSet ts;
  ts.dfs.resize(50);
  for (int k = 0; k < 50; ++k)
    ts.dfs[k] = std::pow(10.0, 2.0 - 10.0 * k / 49.0);
  return ts;
}

namespace {

Rng instance_rng(int fid, int instance, int dim) {
  return Rng(0x5ACB0B5EED000001ULL)
      .stream("testbed")
      .stream(std::uint64_t(fid))
      .stream(std::uint64_t(instance))
      .stream(std::uint64_t(dim));
}

bool needs_r(int fid) {
  switch (fid) {
    case 6: case 7: case 9: case 10: case 11: case 12: case 13: case 14:
    case 15: case 16: case 17: case 18: case 19: case 21: case 22:
    case 23: case 24:
      return true;
    default:
      return false;
  }
}

bool needs_q(int fid) {
  switch (fid) {
    case 6: case 7: case 13: case 15: case 16: case 17: case 18:
    case 23: case 24:
      return true;
    default:
      return false;
  }
}

double rosen_sum(const Vec& z) {
  double s = 0.0;
  for (size_t i = 0; i + 1 < z.size(); ++i)
    s += 100.0 * sqr(z[i] * z[i] - z[i + 1]) + sqr(z[i] - 1.0);
  return s;
}

// Schaffers F7 family with conditioning alpha.
std::function<double(const Vec&)> make_schaffers(
    int dim, const Vec& xopt, double fopt, const Matrix& R, const Matrix& Q,
    double alpha) {
  const Vec lam = lambda_alpha(alpha, dim);
  return [dim, xopt, fopt, R, Q, lam](const Vec& x) {
    Vec z = Q.mul(t_asy(R.mul(sub(x, xopt)), 0.5));
    for (int i = 0; i < dim; ++i) z[i] *= lam[i];
    double acc = 0.0;
    for (int i = 0; i + 1 < dim; ++i) {
      const double si = std::sqrt(z[i] * z[i] + z[i + 1] * z[i + 1]);
      acc += std::sqrt(si) * (1.0 + sqr(std::sin(50.0 * std::pow(si, 0.2))));
    }
    return sqr(acc / (dim - 1)) + 10.0 * f_pen(x) + fopt;
  };
}

// Gallagher peak family; npeaks = 101 or 21.
std::function<double(const Vec&)> make_gallagher(
    int dim, const Vec& xopt, double fopt, const Matrix& R, int npeaks,
    Rng er) {
  const int npool = npeaks == 101 ? 100 : 20;
  Vec pool(npool);
  for (int j = 0; j < npool; ++j)
    pool[j] = std::pow(1000.0, 2.0 * j / (npool - 1));
  for (int j = npool - 1; j > 0; --j)
    std::swap(pool[j], pool[er.below(std::uint64_t(j + 1))]);

  Vec w(npeaks), alpha(npeaks);
  w[0] = 10.0;
  alpha[0] = npeaks == 101 ? 1000.0 : 1000.0 * 1000.0;
  for (int p = 1; p < npeaks; ++p) {
    w[p] = 1.1 + 8.0 * (p - 1) / (npeaks - 2);
    alpha[p] = pool[p - 1];
  }

  const double ybox = npeaks == 101 ? 5.0 : 4.9;
  std::vector<Vec> y(npeaks);
  y[0] = xopt;
  for (int p = 1; p < npeaks; ++p) {
    y[p].resize(dim);
    for (int i = 0; i < dim; ++i) y[p][i] = er.uniform(-ybox, ybox);
  }

  std::vector<Vec> ry(npeaks), cdiag(npeaks);
  for (int p = 0; p < npeaks; ++p) {
    ry[p] = R.mul(y[p]);
    cdiag[p] = lambda_alpha(alpha[p], dim);
    const double norm = std::pow(alpha[p], 0.25);
    for (int i = 0; i < dim; ++i) cdiag[p][i] /= norm;
  }

  return [dim, fopt, R, npeaks, w, ry, cdiag](const Vec& x) {
    const Vec v = R.mul(x);
    double best = 0.0;
    for (int p = 0; p < npeaks; ++p) {
      double q = 0.0;
      for (int i = 0; i < dim; ++i) {
        const double u = v[i] - ry[p][i];
        q += cdiag[p][i] * u * u;
      }
      best = std::max(best, w[p] * std::exp(-q / (2.0 * dim)));
    }
    const double t = t_osz(10.0 - best);
    return t * t + f_pen(x) + fopt;
  };
}

}  // namespace

Objective::Objective(int fid, int instance, int dim)
    : fid_(fid), instance_(instance), dim_(dim) {
  if (fid < 1 || fid > 24)
    throw UnknownFunction("objective: function id must be in 1..24");
  if (dim < 2) throw InvalidParam("objective: dim must be >= 2");
  if (instance < 1) throw InvalidParam("objective: instance must be >= 1");

  const Rng base = instance_rng(fid, instance, dim);

  {
    Rng fr = base.stream("fopt");
    const double n1 = fr.normal();
    const double n2 = fr.normal();
    double c = n2 == 0.0 ? 0.0 : 100.0 * n1 / n2;
    if (!std::isfinite(c)) c = 0.0;
    f_opt_ = std::clamp(std::round(100.0 * c) / 100.0, -1000.0, 1000.0);
  }

  if (needs_r(fid)) {
    Rng rr = base.stream("R");
    rot_r_ = random_orthogonal(rr, dim);
  }
  if (needs_q(fid)) {
    Rng qr = base.stream("Q");
    rot_q_ = random_orthogonal(qr, dim);
  }

  {
    Rng xr = base.stream("xopt");
    x_opt_.resize(dim);
    switch (fid) {
      case 5:
        for (int i = 0; i < dim; ++i)
          x_opt_[i] = xr.uniform01() < 0.5 ? -5.0 : 5.0;
        break;
      case 8:
        for (int i = 0; i < dim; ++i) x_opt_[i] = xr.uniform(-3.0, 3.0);
        break;
      case 9:
      case 19: {
        const double gamma = std::max(1.0, std::sqrt(double(dim)) / 8.0);
        x_opt_ = rot_r_->tmul(Vec(dim, 0.5 / gamma));
        break;
      }
      case 20:
        for (int i = 0; i < dim; ++i)
          x_opt_[i] = (xr.uniform01() < 0.5 ? -1.0 : 1.0) * 4.2096874633 / 2.0;
        break;
      case 21:
        for (int i = 0; i < dim; ++i) x_opt_[i] = xr.uniform(-4.0, 4.0);
        break;
      case 22:
        for (int i = 0; i < dim; ++i) x_opt_[i] = xr.uniform(-3.92, 3.92);
        break;
      case 24:
        for (int i = 0; i < dim; ++i)
          x_opt_[i] = (xr.uniform01() < 0.5 ? -1.0 : 1.0) * 1.25;
        break;
      default:
        for (int i = 0; i < dim; ++i) x_opt_[i] = xr.uniform(-4.0, 4.0);
        if (fid == 4)  // odd 1-based coordinates forced positive
          for (int i = 0; i < dim; i += 2) x_opt_[i] = std::fabs(x_opt_[i]);
        break;
    }
  }

  const Vec xopt = x_opt_;
  const double fopt = f_opt_;

  switch (fid) {
    case 1:
      raw_ = [xopt, fopt](const Vec& x) {
        double s = 0.0;
        for (size_t i = 0; i < x.size(); ++i) s += sqr(x[i] - xopt[i]);
        return s + fopt;
      };
      break;

    case 2: {
      const Vec pw = ten_powers(6.0, dim);
      raw_ = [xopt, fopt, pw](const Vec& x) {
        const Vec z = t_osz(sub(x, xopt));
        double s = 0.0;
        for (size_t i = 0; i < z.size(); ++i) s += pw[i] * z[i] * z[i];
        return s + fopt;
      };
      break;
    }

    case 3: {
      const Vec lam = lambda_alpha(10.0, dim);
      raw_ = [dim, xopt, fopt, lam](const Vec& x) {
        Vec z = t_asy(t_osz(sub(x, xopt)), 0.2);
        for (int i = 0; i < dim; ++i) z[i] *= lam[i];
        double c = 0.0, q = 0.0;
        for (int i = 0; i < dim; ++i) {
          c += std::cos(2.0 * kPi * z[i]);
          q += z[i] * z[i];
        }
        return 10.0 * (dim - c) + q + fopt;
      };
      break;
    }

    case 4: {
      const Vec lam = lambda_alpha(10.0, dim);
      raw_ = [dim, xopt, fopt, lam](const Vec& x) {
        const Vec y = t_osz(sub(x, xopt));
        double c = 0.0, q = 0.0;
        for (int i = 0; i < dim; ++i) {
          double zi = lam[i] * y[i];
          if (y[i] > 0.0 && i % 2 == 0) zi *= 10.0;
          c += std::cos(2.0 * kPi * zi);
          q += zi * zi;
        }
        return 10.0 * (dim - c) + q + 100.0 * f_pen(x) + fopt;
      };
      break;
    }

    case 5: {
      Vec s(dim);
      for (int i = 0; i < dim; ++i)
        s[i] = (xopt[i] > 0.0 ? 1.0 : -1.0) *
               std::pow(10.0, double(i) / (dim - 1));
      raw_ = [dim, xopt, fopt, s](const Vec& x) {
        double f = 0.0;
        for (int i = 0; i < dim; ++i) {
          const double zi = xopt[i] * x[i] < 25.0 ? x[i] : xopt[i];
          f += 5.0 * std::fabs(s[i]) - s[i] * zi;
        }
        return f + fopt;
      };
      break;
    }

    case 6: {
      const Matrix R = *rot_r_, Q = *rot_q_;
      const Vec lam = lambda_alpha(10.0, dim);
      raw_ = [dim, xopt, fopt, R, Q, lam](const Vec& x) {
        Vec t = R.mul(sub(x, xopt));
        for (int i = 0; i < dim; ++i) t[i] *= lam[i];
        const Vec z = Q.mul(t);
        double s = 0.0;
        for (int i = 0; i < dim; ++i) {
          const double si = z[i] * xopt[i] > 0.0 ? 100.0 : 1.0;
          s += sqr(si * z[i]);
        }
        return std::pow(t_osz(s), 0.9) + fopt;
      };
      break;
    }

    case 7: {
      const Matrix R = *rot_r_, Q = *rot_q_;
      const Vec lam = lambda_alpha(10.0, dim);
      const Vec pw = ten_powers(2.0, dim);
      raw_ = [dim, xopt, fopt, R, Q, lam, pw](const Vec& x) {
        Vec zh = R.mul(sub(x, xopt));
        for (int i = 0; i < dim; ++i) zh[i] *= lam[i];
        Vec zt(dim);
        for (int i = 0; i < dim; ++i)
          zt[i] = std::fabs(zh[i]) > 0.5
                      ? std::floor(0.5 + zh[i])
                      : std::floor(0.5 + 10.0 * zh[i]) / 10.0;
        const Vec z = Q.mul(zt);
        double s = 0.0;
        for (int i = 0; i < dim; ++i) s += pw[i] * z[i] * z[i];
        return 0.1 * std::max(std::fabs(zh[0]) / 1e4, s) + f_pen(x) + fopt;
      };
      break;
    }

    case 8: {
      const double gamma = std::max(1.0, std::sqrt(double(dim)) / 8.0);
      raw_ = [dim, xopt, fopt, gamma](const Vec& x) {
        Vec z(dim);
        for (int i = 0; i < dim; ++i) z[i] = gamma * (x[i] - xopt[i]) + 1.0;
        return rosen_sum(z) + fopt;
      };
      break;
    }

    case 9: {
      const Matrix R = *rot_r_;
      const double gamma = std::max(1.0, std::sqrt(double(dim)) / 8.0);
      raw_ = [dim, fopt, R, gamma](const Vec& x) {
        Vec z = R.mul(x);
        for (int i = 0; i < dim; ++i) z[i] = gamma * z[i] + 0.5;
        return rosen_sum(z) + fopt;
      };
      break;
    }

    case 10: {
      const Matrix R = *rot_r_;
      const Vec pw = ten_powers(6.0, dim);
      raw_ = [xopt, fopt, R, pw](const Vec& x) {
        const Vec z = t_osz(R.mul(sub(x, xopt)));
        double s = 0.0;
        for (size_t i = 0; i < z.size(); ++i) s += pw[i] * z[i] * z[i];
        return s + fopt;
      };
      break;
    }

    case 11: {
      const Matrix R = *rot_r_;
      raw_ = [xopt, fopt, R](const Vec& x) {
        const Vec z = t_osz(R.mul(sub(x, xopt)));
        double s = 1e6 * z[0] * z[0];
        for (size_t i = 1; i < z.size(); ++i) s += z[i] * z[i];
        return s + fopt;
      };
      break;
    }

    case 12: {
      const Matrix R = *rot_r_;
      raw_ = [xopt, fopt, R](const Vec& x) {
        const Vec z = R.mul(t_asy(R.mul(sub(x, xopt)), 0.5));
        double s = z[0] * z[0];
        for (size_t i = 1; i < z.size(); ++i) s += 1e6 * z[i] * z[i];
        return s + fopt;
      };
      break;
    }

    case 13: {
      const Matrix R = *rot_r_, Q = *rot_q_;
      const Vec lam = lambda_alpha(10.0, dim);
      raw_ = [dim, xopt, fopt, R, Q, lam](const Vec& x) {
        Vec t = R.mul(sub(x, xopt));
        for (int i = 0; i < dim; ++i) t[i] *= lam[i];
        const Vec z = Q.mul(t);
        double tail = 0.0;
        for (int i = 1; i < dim; ++i) tail += z[i] * z[i];
        return z[0] * z[0] + 100.0 * std::sqrt(tail) + fopt;
      };
      break;
    }

    case 14: {
      const Matrix R = *rot_r_;
      Vec ex(dim);
      for (int i = 0; i < dim; ++i) ex[i] = 2.0 + 4.0 * i / (dim - 1);
      raw_ = [dim, xopt, fopt, R, ex](const Vec& x) {
        const Vec z = R.mul(sub(x, xopt));
        double s = 0.0;
        for (int i = 0; i < dim; ++i) s += std::pow(std::fabs(z[i]), ex[i]);
        return std::sqrt(s) + fopt;
      };
      break;
    }

    case 15: {
      const Matrix R = *rot_r_, Q = *rot_q_;
      const Vec lam = lambda_alpha(10.0, dim);
      raw_ = [dim, xopt, fopt, R, Q, lam](const Vec& x) {
        Vec t = Q.mul(t_asy(t_osz(R.mul(sub(x, xopt))), 0.2));
        for (int i = 0; i < dim; ++i) t[i] *= lam[i];
        const Vec z = R.mul(t);
        double c = 0.0, q = 0.0;
        for (int i = 0; i < dim; ++i) {
          c += std::cos(2.0 * kPi * z[i]);
          q += z[i] * z[i];
        }
        return 10.0 * (dim - c) + q + fopt;
      };
      break;
    }

    case 16: {
      const Matrix R = *rot_r_, Q = *rot_q_;
      const Vec lam = lambda_alpha(0.01, dim);
      std::array<double, 12> ak, bk;
      for (int k = 0; k < 12; ++k) {
        ak[k] = std::pow(0.5, k);
        bk[k] = 2.0 * kPi * std::pow(3.0, k);
      }
      const double f0 = -(2.0 - std::pow(2.0, -11.0));
      raw_ = [dim, xopt, fopt, R, Q, lam, ak, bk, f0](const Vec& x) {
        Vec t = Q.mul(t_osz(R.mul(sub(x, xopt))));
        for (int i = 0; i < dim; ++i) t[i] *= lam[i];
        const Vec z = R.mul(t);
        double s = 0.0;
        for (int i = 0; i < dim; ++i)
          for (int k = 0; k < 12; ++k) s += ak[k] * std::cos(bk[k] * (z[i] + 0.5));
        const double base = s / dim - f0;
        return 10.0 * base * base * base + 10.0 / dim * f_pen(x) + fopt;
      };
      break;
    }

    case 17:
      raw_ = make_schaffers(dim, xopt, fopt, *rot_r_, *rot_q_, 10.0);
      break;
    case 18:
      raw_ = make_schaffers(dim, xopt, fopt, *rot_r_, *rot_q_, 1000.0);
      break;

    case 19: {
      const Matrix R = *rot_r_;
      const double gamma = std::max(1.0, std::sqrt(double(dim)) / 8.0);
      raw_ = [dim, fopt, R, gamma](const Vec& x) {
        Vec z = R.mul(x);
        for (int i = 0; i < dim; ++i) z[i] = gamma * z[i] + 0.5;
        double acc = 0.0;
        for (int i = 0; i + 1 < dim; ++i) {
          const double s =
              100.0 * sqr(z[i] * z[i] - z[i + 1]) + sqr(z[i] - 1.0);
          acc += s / 4000.0 - std::cos(s);
        }
        return 10.0 * acc / (dim - 1) + 10.0 + fopt;
      };
      break;
    }

    case 20: {
      const Vec lam = lambda_alpha(10.0, dim);
      Vec sgn(dim), txo(dim);
      for (int i = 0; i < dim; ++i) {
        sgn[i] = xopt[i] > 0.0 ? 1.0 : -1.0;
        txo[i] = 2.0 * std::fabs(xopt[i]);
      }
      raw_ = [dim, fopt, lam, sgn, txo](const Vec& x) {
        Vec xh(dim);
        for (int i = 0; i < dim; ++i) xh[i] = 2.0 * sgn[i] * x[i];
        Vec zh(dim);
        zh[0] = xh[0];
        for (int i = 1; i < dim; ++i)
          zh[i] = xh[i] + 0.25 * (xh[i - 1] - txo[i - 1]);
        Vec z(dim), z100(dim);
        double s = 0.0;
        for (int i = 0; i < dim; ++i) {
          z[i] = 100.0 * (lam[i] * (zh[i] - txo[i]) + txo[i]);
          z100[i] = z[i] / 100.0;
          s += z[i] * std::sin(std::sqrt(std::fabs(z[i])));
        }
        return -s / (100.0 * dim) + 4.189828872724339 +
               100.0 * f_pen(z100) + fopt;
      };
      break;
    }

    case 21:
    case 22:
      raw_ = make_gallagher(dim, xopt, fopt, *rot_r_, fid == 21 ? 101 : 21,
                            base.stream("extra"));
      break;

    case 23: {
      const Matrix R = *rot_r_, Q = *rot_q_;
      const Vec lam = lambda_alpha(100.0, dim);
      const double pexp = 10.0 / std::pow(double(dim), 1.2);
      const double coef = 10.0 / (dim * dim);
      raw_ = [dim, xopt, fopt, R, Q, lam, pexp, coef](const Vec& x) {
        Vec t = R.mul(sub(x, xopt));
        for (int i = 0; i < dim; ++i) t[i] *= lam[i];
        const Vec z = Q.mul(t);
        double prod = 1.0;
        for (int i = 0; i < dim; ++i) {
          double s = 0.0;
          double p2 = 1.0;
          for (int j = 1; j <= 32; ++j) {
            p2 *= 2.0;
            const double a = p2 * z[i];
            s += std::fabs(a - std::round(a)) / p2;
          }
          prod *= std::pow(1.0 + (i + 1) * s, pexp);
        }
        return coef * prod - coef + f_pen(x) + fopt;
      };
      break;
    }

    case 24: {
      const Matrix R = *rot_r_, Q = *rot_q_;
      const Vec lam = lambda_alpha(100.0, dim);
      const double mu0 = 2.5, dpar = 1.0;
      const double s = 1.0 - 1.0 / (2.0 * std::sqrt(double(dim) + 20.0) - 8.2);
      const double mu1 = -std::sqrt((mu0 * mu0 - dpar) / s);
      Vec sgn(dim);
      for (int i = 0; i < dim; ++i) sgn[i] = xopt[i] > 0.0 ? 1.0 : -1.0;
      raw_ = [dim, fopt, R, Q, lam, mu0, dpar, s, mu1, sgn](const Vec& x) {
        Vec xh(dim), t(dim);
        for (int i = 0; i < dim; ++i) {
          xh[i] = 2.0 * sgn[i] * x[i];
          t[i] = xh[i] - mu0;
        }
        Vec u = R.mul(t);
        for (int i = 0; i < dim; ++i) u[i] *= lam[i];
        const Vec z = Q.mul(u);
        double s1 = 0.0, s2 = 0.0, c = 0.0;
        for (int i = 0; i < dim; ++i) {
          s1 += sqr(xh[i] - mu0);
          s2 += sqr(xh[i] - mu1);
          c += std::cos(2.0 * kPi * z[i]);
        }
        return std::min(s1, dpar * dim + s * s2) + 10.0 * (dim - c) +
               1e4 * f_pen(x) + fopt;
      };
      break;
    }

    default:
      throw UnknownFunction("objective: function id must be in 1..24");
  }

  targets_ = TargetSet::standard();
  hit_evals_.assign(targets_.dfs.size(), -1);
}

double Objective::evaluate(const Vec& x) {
  if (int(x.size()) != dim_ || !all_finite(x))
    throw InvalidInput("evaluate: x must be a finite vector of length dim");
  const double f = raw_(x);
  ++evals_;
  if (f < best_f_) best_f_ = f;
  const double df = best_f_ - f_opt_;
  while (next_target_ < targets_.dfs.size() &&
         df <= targets_.dfs[next_target_]) {
    hit_evals_[next_target_] = evals_;
    ++next_target_;
  }
  return f;
}

double Objective::raw(const Vec& x) const {
  if (int(x.size()) != dim_ || !all_finite(x))
    throw InvalidInput("raw: x must be a finite vector of length dim");
  return raw_(x);
}

void Objective::set_targets(const TargetSet& ts) {
  if (evals_ > 0)
    throw InvalidParam("set_targets: objective already evaluated");
  if (ts.dfs.empty()) throw InvalidParam("set_targets: empty target set");
  for (size_t i = 0; i < ts.dfs.size(); ++i) {
    if (!(ts.dfs[i] > 0.0))
      throw InvalidParam("set_targets: targets must be positive");
    if (i > 0 && !(ts.dfs[i] < ts.dfs[i - 1]))
      throw InvalidParam("set_targets: targets must be strictly decreasing");
  }
  targets_ = ts;
  hit_evals_.assign(targets_.dfs.size(), -1);
  next_target_ = 0;
}

Objective make_objective(int fid, int instance, int dim) {
  return Objective(fid, instance, dim);
}

Problem make_problem(Objective& obj, std::int64_t max_evals,
                     double target_df) {
  Problem p;
  p.fn = [&obj](const Vec& x) { return obj.evaluate(x); };
  p.max_evals = max_evals;
  p.target_f = obj.f_opt() + target_df;
  return p;
}

const char* function_name(int fid) {
  switch (fid) {
    case 1: return "sphere";
    case 2: return "ellipsoidal";
    case 3: return "rastrigin";
    case 4: return "bueche-rastrigin";
    case 5: return "linear-slope";
    case 6: return "attractive-sector";
    case 7: return "step-ellipsoidal";
    case 8: return "rosenbrock";
    case 9: return "rosenbrock-rotated";
    case 10: return "ellipsoidal-rotated";
    case 11: return "discus";
    case 12: return "bent-cigar";
    case 13: return "sharp-ridge";
    case 14: return "different-powers";
    case 15: return "rastrigin-rotated";
    case 16: return "weierstrass";
    case 17: return "schaffers-f7";
    case 18: return "schaffers-f7-ill";
    case 19: return "griewank-rosenbrock";
    case 20: return "schwefel";
    case 21: return "gallagher-101";
    case 22: return "gallagher-21";
    case 23: return "katsuura";
    case 24: return "lunacek-bi-rastrigin";
    default: throw UnknownFunction("function_name: id must be in 1..24");
  }
}

int function_group(int fid) {
  if (fid >= 1 && fid <= 5) return 1;
  if (fid >= 6 && fid <= 9) return 2;
  if (fid >= 10 && fid <= 14) return 3;
  if (fid >= 15 && fid <= 19) return 4;
  if (fid >= 20 && fid <= 24) return 5;
  throw UnknownFunction("function_group: id must be in 1..24");
}

const char* group_name(int group) {
  switch (group) {
    case 1: return "separable";
    case 2: return "moderate";
    case 3: return "ill-conditioned";
    case 4: return "multi-modal";
    case 5: return "weakly-structured";
    default: throw InvalidParam("group_name: group must be in 1..5");
  }
}

void metadata_csv(std::ostream& os, const std::vector<int>& fids,
                  const std::vector<int>& instances,
                  const std::vector<int>& dims) {
  os << "fid,name,group,dim,instance,f_opt\n";
  char buf[64];
  for (int fid : fids)
    for (int dim : dims)
      for (int inst : instances) {
        const Objective obj = make_objective(fid, inst, dim);
        std::snprintf(buf, sizeof buf, "%.2f", obj.f_opt());
        os << fid << ',' << function_name(fid) << ','
           << group_name(function_group(fid)) << ',' << dim << ',' << inst
           << ',' << buf << '\n';
      }
}

}  // namespace sacma
