#include "g2frames/exterior.hpp"

#include <bit>
#include <cstdio>
#include <mutex>
#include <sstream>

namespace g2frames {
namespace combin {

namespace {

struct Tables {
  // masks[k] lists all k-subsets of {0..7} in colex order.
  std::array<std::vector<Mask>, kMaxDim + 1> masks;
  std::array<int, 256> rankOf{};
  // wedge[n][k1][k2]
  std::vector<WedgeEntry> wedge[kMaxDim + 1][kMaxDim + 1][kMaxDim + 1];

  Tables() {
    for (int m = 0; m < 256; ++m) {
      int r = 0, j = 0;
      for (int i = 0; i < kMaxDim; ++i) {
        if (m & (1 << i)) {
          ++j;
          r += binomial(i, j);
        }
      }
      rankOf[m] = r;
    }
    for (int k = 0; k <= kMaxDim; ++k) {
      masks[k].assign(binomial(kMaxDim, k), 0);
      for (int m = 0; m < 256; ++m)
        if (std::popcount(static_cast<unsigned>(m)) == k) masks[k][rankOf[m]] = static_cast<Mask>(m);
    }
    for (int n = 0; n <= kMaxDim; ++n) {
      for (int k1 = 0; k1 <= n; ++k1) {
        for (int k2 = 0; k1 + k2 <= n; ++k2) {
          auto& table = wedge[n][k1][k2];
          for (int a = 0; a < binomial(n, k1); ++a) {
            for (int b = 0; b < binomial(n, k2); ++b) {
              const Mask ma = masks[k1][a], mb = masks[k2][b];
              if (ma & mb) continue;
              table.push_back({static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b),
                               static_cast<std::uint8_t>(rankOf[ma | mb]),
                               static_cast<std::int8_t>(mergeSign(ma, mb))});
            }
          }
        }
      }
    }
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

}  // namespace

int popcount(Mask m) { return std::popcount(static_cast<unsigned>(m)); }

int rank(Mask m) { return tables().rankOf[m]; }

Mask unrank(int k, int slot) { return tables().masks[k][slot]; }

int mergeSign(Mask a, Mask b) {
  int inversions = 0;
  for (int j = 0; j < kMaxDim; ++j) {
    if (b & (1u << j)) inversions += popcount(static_cast<Mask>(a >> (j + 1)));
  }
  return (inversions % 2 == 0) ? 1 : -1;
}

const std::vector<WedgeEntry>& wedgeTable(int n, int k1, int k2) { return tables().wedge[n][k1][k2]; }

std::pair<Mask, int> canonical(std::span<const int> indices) {
  Mask mask = 0;
  int sign = 1;
  for (int i : indices) {
    if (i < 0 || i >= kMaxDim) throw DimensionError("basis index out of range");
    const auto bit = static_cast<Mask>(1u << i);
    if (mask & bit) return {0, 0};
    // moving e^i past the already collected higher labels
    if (popcount(static_cast<Mask>(mask >> (i + 1))) % 2 == 1) sign = -sign;
    mask |= bit;
  }
  return {mask, sign};
}

}  // namespace combin

Multivector liftForm(const Multivector& f, int newDim, int offset) {
  if (offset < 0 || f.dim() + offset > newDim) throw DimensionError("lift does not fit the target dimension");
  Multivector out(newDim, f.degree());
  for (int slot = 0; slot < f.size(); ++slot) {
    out[combin::rank(static_cast<combin::Mask>(f.maskAt(slot) << offset))] = f[slot];
  }
  return out;
}

Multivector restrictForm(const Multivector& f, int offset, int dim) {
  if (f.degree() > dim) return Multivector(dim, dim);
  Multivector out(dim, f.degree());
  const auto window = static_cast<combin::Mask>(((1u << dim) - 1u) << offset);
  for (int slot = 0; slot < f.size(); ++slot) {
    const auto m = f.maskAt(slot);
    if ((m & ~window) != 0) continue;
    out[combin::rank(static_cast<combin::Mask>(m >> offset))] = f[slot];
  }
  return out;
}

double maxAbs(const Multivector& f) {
  double m = 0.0;
  for (double c : f.coeffs()) m = std::max(m, std::abs(c));
  return m;
}

double norm(const Multivector& f) {
  double s = 0.0;
  for (double c : f.coeffs()) s += c * c;
  return std::sqrt(s);
}

double inner(const Multivector& a, const Multivector& b, std::span<const double> metricDiag) {
  if (a.dim() != b.dim() || a.degree() != b.degree()) throw DimensionError("inner product of mismatched forms");
  if (static_cast<int>(metricDiag.size()) != a.dim()) throw DimensionError("metric length differs from dimension");
  double s = 0.0;
  for (int slot = 0; slot < a.size(); ++slot) {
    const auto m = a.maskAt(slot);
    double w = 1.0;
    for (int i = 0; i < a.dim(); ++i)
      if (m & (1u << i)) w /= metricDiag[i];
    s += w * a[slot] * b[slot];
  }
  return s;
}

double norm(const Multivector& a, std::span<const double> metricDiag) {
  return std::sqrt(inner(a, a, metricDiag));
}

Multivector hodge(const Multivector& a, std::span<const double> metricDiag, int orientation) {
  const int n = a.dim();
  if (static_cast<int>(metricDiag.size()) != n)
    throw DimensionError("metric has " + std::to_string(metricDiag.size()) + " entries for dimension " +
                         std::to_string(n));
  if (orientation != 1 && orientation != -1) throw std::invalid_argument("orientation must be +1 or -1");
  double volume = 1.0;
  for (double g : metricDiag) {
    if (!(g > 0.0)) throw std::invalid_argument("hodge: metric entries must be positive");
    volume *= g;
  }
  volume = std::sqrt(volume);
  const auto full = static_cast<combin::Mask>((1u << n) - 1u);
  Multivector out(n, n - a.degree());
  for (int slot = 0; slot < a.size(); ++slot) {
    const auto m = a.maskAt(slot);
    const auto comp = static_cast<combin::Mask>(full & ~m);
    double w = volume * orientation * combin::mergeSign(m, comp);
    for (int i = 0; i < n; ++i)
      if (m & (1u << i)) w /= metricDiag[i];
    out[combin::rank(comp)] += w * a[slot];
  }
  return out;
}

Multivector hodge(const Multivector& a, int orientation) {
  std::vector<double> unit(a.dim(), 1.0);
  return hodge(a, unit, orientation);
}

Multivector interior(std::span<const double> v, const Multivector& a) {
  if (static_cast<int>(v.size()) != a.dim()) throw DimensionError("interior: vector length differs from dimension");
  if (a.degree() == 0) throw DimensionError("interior product of a 0-form");
  Multivector out(a.dim(), a.degree() - 1);
  for (int slot = 0; slot < a.size(); ++slot) {
    const auto m = a.maskAt(slot);
    int position = 0;
    for (int i = 0; i < a.dim(); ++i) {
      if (!(m & (1u << i))) continue;
      const double sign = (position % 2 == 0) ? 1.0 : -1.0;
      out[combin::rank(static_cast<combin::Mask>(m & ~(1u << i)))] += sign * v[i] * a[slot];
      ++position;
    }
  }
  return out;
}

Multivector changeBasis(const Multivector& a, std::span<const double> inverseRowMajor) {
  const int n = a.dim();
  if (static_cast<int>(inverseRowMajor.size()) != n * n) throw DimensionError("changeBasis: matrix size");
  std::vector<Multivector> oneForms;
  oneForms.reserve(n);
  for (int mu = 0; mu < n; ++mu) {
    Multivector e(n, 1);
    for (int i = 0; i < n; ++i) e[combin::rank(static_cast<combin::Mask>(1u << i))] = inverseRowMajor[mu * n + i];
    oneForms.push_back(e);
  }
  Multivector out(n, a.degree());
  for (int slot = 0; slot < a.size(); ++slot) {
    if (a[slot] == 0.0) continue;
    const auto m = a.maskAt(slot);
    Multivector term = Multivector::scalar(n, a[slot]);
    for (int mu = 0; mu < n; ++mu)
      if (m & (1u << mu)) term = wedge(term, oneForms[mu]);
    out += term;
  }
  return out;
}

Multivector rescale(const Multivector& a, std::span<const double> scale) {
  Multivector out = a;
  for (int slot = 0; slot < a.size(); ++slot) {
    const auto m = a.maskAt(slot);
    for (int i = 0; i < a.dim(); ++i)
      if (m & (1u << i)) out[slot] *= scale[i];
  }
  return out;
}

std::string toString(const Multivector& a, int labelOffset, double threshold) {
  std::ostringstream os;
  bool first = true;
  for (int slot = 0; slot < a.size(); ++slot) {
    if (std::abs(a[slot]) <= threshold) continue;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s%.12g", first ? "" : " + ", a[slot]);
    os << buf;
    if (a.degree() > 0) {
      os << " e^";
      const auto m = a.maskAt(slot);
      for (int i = 0; i < a.dim(); ++i)
        if (m & (1u << i)) os << (i + labelOffset);
    }
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

}  // namespace g2frames
