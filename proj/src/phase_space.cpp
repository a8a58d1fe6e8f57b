#include "pwf/phase_space.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

namespace pwf {

namespace {

constexpr std::size_t kMaxCachedEntries = 20'000'000;

int mod(int a, int d) { return ((a % d) + d) % d; }

Complex root_of_unity(int d, double numerator) {
  return std::polar(1.0, 2.0 * std::numbers::pi * numerator / d);
}

}  // namespace

QuditDims::QuditDims(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw DomainError("QuditDims: empty dimension list");
  for (int d : dims_) {
    if (!is_odd_prime(d)) {
      std::ostringstream msg;
      msg << "QuditDims: " << d << " is not an odd prime";
      throw DomainError(msg.str());
    }
    total_ *= d;
  }
}

QuditDims QuditDims::uniform(int d, int copies) {
  if (copies < 1) throw DomainError("QuditDims: copy count must be positive");
  return QuditDims(std::vector<int>(static_cast<std::size_t>(copies), d));
}

std::size_t QuditDims::point_count() const {
  std::size_t n = 1;
  for (int d : dims_) n *= static_cast<std::size_t>(d) * d;
  return n;
}

QuditDims QuditDims::concat(const QuditDims& other) const {
  std::vector<int> all = dims_;
  all.insert(all.end(), other.dims_.begin(), other.dims_.end());
  return QuditDims(std::move(all));
}

std::size_t PhasePoint::index(const QuditDims& dims) const {
  if (coords.size() != dims.dims().size())
    throw DomainError("PhasePoint: subsystem count does not match dims");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const int d = dims.dims()[i];
    const auto [a1, a2] = coords[i];
    if (a1 < 0 || a1 >= d || a2 < 0 || a2 >= d)
      throw DomainError("PhasePoint: coordinate not reduced mod d");
    idx = idx * static_cast<std::size_t>(d * d) + static_cast<std::size_t>(a1 * d + a2);
  }
  return idx;
}

PhasePoint PhasePoint::from_index(std::size_t index, const QuditDims& dims) {
  if (index >= dims.point_count()) throw DomainError("PhasePoint: index out of range");
  PhasePoint u;
  u.coords.resize(dims.dims().size());
  for (std::size_t i = dims.dims().size(); i-- > 0;) {
    const auto d = static_cast<std::size_t>(dims.dims()[i]);
    const std::size_t local = index % (d * d);
    index /= d * d;
    u.coords[i] = {static_cast<int>(local / d), static_cast<int>(local % d)};
  }
  return u;
}

PhasePoint PhasePoint::origin(const QuditDims& dims) {
  PhasePoint u;
  u.coords.assign(dims.dims().size(), {0, 0});
  return u;
}

BoostShift boost_shift(int d) {
  if (!is_odd_prime(d)) throw DomainError("boost_shift: dimension must be an odd prime");
  BoostShift bs{ComplexMatrix::Zero(d, d), ComplexMatrix::Zero(d, d)};
  for (int j = 0; j < d; ++j) {
    bs.X(mod(j + 1, d), j) = 1.0;
    bs.Z(j, j) = root_of_unity(d, j);
  }
  return bs;
}

ComplexMatrix weyl_operator(int a1, int a2, int d) {
  if (!is_odd_prime(d)) throw DomainError("weyl_operator: dimension must be an odd prime");
  a1 = mod(a1, d);
  a2 = mod(a2, d);
  // Z^{a1} X^{a2} |j> = w^{a1 (j + a2)} |j + a2>
  const double tau_arg = std::numbers::pi * (d + 1) / d;
  const Complex phase = std::polar(1.0, -tau_arg * a1 * a2);
  ComplexMatrix t = ComplexMatrix::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    const int target = mod(j + a2, d);
    t(target, j) = phase * root_of_unity(d, static_cast<double>(mod(a1 * target, d)));
  }
  return t;
}

ComplexMatrix weyl_operator(const PhasePoint& u, const QuditDims& dims) {
  if (u.coords.size() != dims.dims().size())
    throw DomainError("weyl_operator: subsystem count does not match dims");
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (std::size_t i = 0; i < u.coords.size(); ++i)
    out = kron(out, weyl_operator(u.coords[i].first, u.coords[i].second, dims.dims()[i]));
  return out;
}

namespace {

ComplexMatrix single_point_operator(int a1, int a2, int d) {
  ComplexMatrix a0 = ComplexMatrix::Zero(d, d);
  for (int w1 = 0; w1 < d; ++w1)
    for (int w2 = 0; w2 < d; ++w2) a0 += weyl_operator(w1, w2, d);
  a0 /= static_cast<double>(d);
  const ComplexMatrix t = weyl_operator(a1, a2, d);
  return t * a0 * t.adjoint();
}

MonomialMatrix to_monomial(const ComplexMatrix& m) {
  MonomialMatrix mono;
  mono.row.resize(static_cast<std::size_t>(m.cols()));
  mono.value.resize(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    Eigen::Index best = 0;
    m.col(j).cwiseAbs().maxCoeff(&best);
    mono.row[static_cast<std::size_t>(j)] = static_cast<int>(best);
    mono.value[static_cast<std::size_t>(j)] = m(best, j);
    const double rest = (m.col(j).cwiseAbs().sum() - std::abs(m(best, j)));
    if (rest > 1e-9) throw NumericalError("point operator is not monomial");
  }
  return mono;
}

}  // namespace

PhaseSpace::PhaseSpace(QuditDims dims) : dims_(std::move(dims)) {
  const auto points = dims_.point_count();
  const auto dim = static_cast<std::size_t>(dims_.total_dim());
  if (points * dim * dim > kMaxCachedEntries)
    throw DomainError("PhaseSpace: system too large to enumerate all point operators");

  // Local families first, then tensor products in enumeration order.
  std::vector<std::vector<ComplexMatrix>> local;
  for (int d : dims_.dims()) {
    std::vector<ComplexMatrix> fam;
    for (int a1 = 0; a1 < d; ++a1)
      for (int a2 = 0; a2 < d; ++a2) fam.push_back(single_point_operator(a1, a2, d));
    local.push_back(std::move(fam));
  }
  ops_.reserve(points);
  mono_.reserve(points);
  for (std::size_t idx = 0; idx < points; ++idx) {
    const PhasePoint u = PhasePoint::from_index(idx, dims_);
    ComplexMatrix a = ComplexMatrix::Identity(1, 1);
    for (std::size_t i = 0; i < u.coords.size(); ++i) {
      const int d = dims_.dims()[i];
      a = kron(a, local[i][static_cast<std::size_t>(u.coords[i].first * d + u.coords[i].second)]);
    }
    // Entries are roots of unity up to rounding; snap tiny noise to zero.
    a = a.unaryExpr([](Complex z) {
      return Complex(std::abs(z.real()) < 1e-14 ? 0.0 : z.real(),
                     std::abs(z.imag()) < 1e-14 ? 0.0 : z.imag());
    });
    mono_.push_back(to_monomial(a));
    ops_.emplace_back(a);
  }
}

std::shared_ptr<const PhaseSpace> PhaseSpace::of(const QuditDims& dims) {
  static std::mutex lock;
  static std::map<std::vector<int>, std::shared_ptr<const PhaseSpace>> cache;
  std::lock_guard<std::mutex> guard(lock);
  auto it = cache.find(dims.dims());
  if (it != cache.end()) return it->second;
  auto space = std::make_shared<const PhaseSpace>(dims);
  cache.emplace(dims.dims(), space);
  return space;
}

const HermitianOperator& PhaseSpace::point_operator(const PhasePoint& u) const {
  return ops_[u.index(dims_)];
}

double PhaseSpace::trace_with(std::size_t index, const ComplexMatrix& h) const {
  // Tr[A H] = sum_j A(row_j, j) H(j, row_j)
  const MonomialMatrix& mono = mono_[index];
  Complex acc = 0.0;
  for (std::size_t j = 0; j < mono.row.size(); ++j)
    acc += mono.value[j] * h(static_cast<Eigen::Index>(j), mono.row[j]);
  return acc.real();
}

RealVector PhaseSpace::traces(const ComplexMatrix& h) const {
  if (h.rows() != dim() || h.cols() != dim())
    throw DomainError("PhaseSpace: operator dimension does not match dims");
  RealVector out(static_cast<Eigen::Index>(size()));
  for (std::size_t i = 0; i < size(); ++i) out(static_cast<Eigen::Index>(i)) = trace_with(i, h);
  return out;
}

const HermitianOperator& phase_point_operator(const PhasePoint& u, const QuditDims& dims) {
  // The cache owns the operator for the lifetime of the program.
  return PhaseSpace::of(dims)->point_operator(u);
}

bool AlgebraReport::all_passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  for (const auto& s : spectra)
    if (!s.passed) return false;
  return true;
}

SpectrumCheck point_operator_spectrum(int d, double tol) {
  const auto space = PhaseSpace::of(QuditDims({d}));
  SpectrumCheck out;
  out.d = d;
  const RealVector ref = space->point_operator(0).eigenvalues();
  for (Eigen::Index i = 0; i < ref.size(); ++i) {
    const double ev = ref(i);
    const double nearest = ev >= 0 ? 1.0 : -1.0;
    out.max_eigenvalue_deviation = std::max(out.max_eigenvalue_deviation, std::abs(ev - nearest));
    (ev >= 0 ? out.plus_multiplicity : out.minus_multiplicity)++;
  }
  for (std::size_t idx = 1; idx < space->size(); ++idx) {
    const RealVector ev = space->point_operator(idx).eigenvalues();
    out.max_spectrum_spread = std::max(out.max_spectrum_spread, max_abs(ev - ref));
  }
  out.passed = out.plus_multiplicity == (d + 1) / 2 && out.minus_multiplicity == (d - 1) / 2 &&
               out.max_eigenvalue_deviation <= tol && out.max_spectrum_spread <= tol;
  return out;
}

AlgebraReport verify_phase_point_algebra(const QuditDims& dims, std::uint64_t seed, double tol) {
  const auto space = PhaseSpace::of(dims);
  const auto n = space->size();
  const Eigen::Index dim = space->dim();
  const auto ddim = static_cast<double>(dim);
  AlgebraReport report{dims, {}, {}};
  auto record = [&](std::string name, double residual) {
    report.checks.push_back({std::move(name), residual <= tol, residual});
  };

  double herm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = space->point_operator(i).matrix();
    herm = std::max(herm, max_abs(a - a.adjoint()));
  }
  record("hermitian", herm);

  ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
  for (std::size_t i = 0; i < n; ++i) sum += space->point_operator(i).matrix();
  record("resolution_of_identity", max_abs(sum / ddim - ComplexMatrix::Identity(dim, dim)));

  double ortho = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const ComplexMatrix& ai = space->point_operator(i).matrix();
    for (std::size_t j = 0; j < n; ++j) {
      const double t = space->trace_with(j, ai);
      ortho = std::max(ortho, std::abs(t - (i == j ? ddim : 0.0)));
    }
  }
  record("orthogonality", ortho);

  double unit = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    unit = std::max(unit, std::abs(space->point_operator(i).trace() - 1.0));
  record("unit_trace", unit);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  ComplexMatrix g(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
  const ComplexMatrix h = (g + g.adjoint()) / 2.0;
  ComplexMatrix rebuilt = ComplexMatrix::Zero(dim, dim);
  for (std::size_t i = 0; i < n; ++i)
    rebuilt += (space->trace_with(i, h) / ddim) * space->point_operator(i).matrix();
  record("reconstruction", max_abs(h - rebuilt));

  // A_u^T expanded in the orthogonal basis has a single unit coefficient.
  double closure = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const ComplexMatrix at = space->point_operator(i).matrix().transpose();
    std::size_t best = 0;
    double best_coeff = -1.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double c = space->trace_with(j, at) / ddim;
      if (c > best_coeff) {
        best_coeff = c;
        best = j;
      }
    }
    closure = std::max(closure, max_abs(at - space->point_operator(best).matrix()));
  }
  record("transpose_closure", closure);

  std::set<int> distinct(dims.dims().begin(), dims.dims().end());
  for (int d : distinct) report.spectra.push_back(point_operator_spectrum(d, tol));
  return report;
}

}  // namespace pwf
