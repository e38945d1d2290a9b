#include "wnoise/ensemble.hpp"

#include <numeric>
#include <unordered_map>

#include "wnoise/errors.hpp"

namespace wnoise {

std::string_view to_string(EntryLaw law) {
  switch (law) {
    case EntryLaw::rademacher: return "rademacher";
    case EntryLaw::gaussian: return "gaussian";
    case EntryLaw::uniform_scaled: return "uniform_scaled";
    case EntryLaw::symmetrized_exponential: return "symmetrized_exponential";
  }
  return "unknown";
}

EntryLaw parse_entry_law(std::string_view tag) {
  for (auto law : {EntryLaw::rademacher, EntryLaw::gaussian, EntryLaw::uniform_scaled,
                   EntryLaw::symmetrized_exponential}) {
    if (tag == to_string(law)) return law;
  }
  throw ConfigError("unsupported entry distribution '" + std::string(tag) + "'");
}

double draw_unit(EntryLaw law, RandomStream& rng) {
  switch (law) {
    case EntryLaw::rademacher: return (rng.next_u64() >> 63) != 0 ? 1.0 : -1.0;
    case EntryLaw::gaussian: return rng.normal();
    case EntryLaw::uniform_scaled: return std::sqrt(3.0) * (2.0 * rng.uniform() - 1.0);
    case EntryLaw::symmetrized_exponential: {
      const double sign = (rng.next_u64() >> 63) != 0 ? 1.0 : -1.0;
      return sign * -std::log(rng.uniform_open()) / std::sqrt(2.0);
    }
  }
  throw ConfigError("unsupported entry distribution");
}

double draw_entry(const EntrySpec& spec, std::size_t i, std::size_t j, RandomStream& rng) {
  const double x = draw_unit(spec.offdiag, rng);
  return i == j ? spec.diag_sigma0 * x : x;
}

std::pair<std::size_t, std::size_t> pair_from_index(std::size_t n, std::size_t index) {
  if (index >= pair_count(n)) throw DomainError("pair index out of range");
  // Solve i*n - i(i-1)/2 <= index for the largest i, then correct rounding.
  const double nn = static_cast<double>(n);
  const double disc = (2.0 * nn + 1.0) * (2.0 * nn + 1.0) - 8.0 * static_cast<double>(index);
  auto i = static_cast<std::size_t>(std::max(0.0, std::floor(((2.0 * nn + 1.0) - std::sqrt(disc)) / 2.0)));
  if (i >= n) i = n - 1;
  while (i > 0 && pair_index(n, i, i) > index) --i;
  while (i + 1 < n && pair_index(n, i + 1, i + 1) <= index) ++i;
  return {i, i + (index - pair_index(n, i, i))};
}

SymmetricMatrix::SymmetricMatrix(std::size_t dim) : dim_(dim), upper_(pair_count(dim), 0.0) {
  if (dim == 0) throw DomainError("matrix dimension must be at least 1");
}

SymmetricMatrix::SymmetricMatrix(std::size_t dim, std::vector<double> upper) : dim_(dim), upper_(std::move(upper)) {
  if (dim == 0) throw DomainError("matrix dimension must be at least 1");
  if (upper_.size() != pair_count(dim)) throw DomainError("packed storage has wrong length");
}

void SymmetricMatrix::set(std::size_t i, std::size_t j, double value) {
  if (i >= dim_ || j >= dim_) throw DomainError("matrix index out of range");
  if (i > j) std::swap(i, j);
  upper_[pair_index(dim_, i, j)] = value;
}

Eigen::MatrixXd SymmetricMatrix::to_dense() const {
  const auto n = static_cast<Eigen::Index>(dim_);
  Eigen::MatrixXd out(n, n);
  std::size_t t = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      out(i, j) = upper_[t];
      out(j, i) = upper_[t];
      ++t;
    }
  }
  return out;
}

SymmetricMatrix SymmetricMatrix::from_dense(const Eigen::MatrixXd& dense) {
  if (dense.rows() != dense.cols()) throw DomainError("matrix must be square");
  const auto n = static_cast<std::size_t>(dense.rows());
  SymmetricMatrix out(n);
  std::size_t t = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) out.upper_[t++] = dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return out;
}

IndexPairSet IndexPairSet::prefix(std::size_t k) const {
  if (k > pairs.size()) throw DomainError("prefix longer than the pair set");
  IndexPairSet out{dim, {}};
  out.pairs.assign(pairs.begin(), pairs.begin() + static_cast<std::ptrdiff_t>(k));
  return out;
}

SymmetricMatrix sample_wigner(std::size_t n, const EntrySpec& spec, const SeedContext& seed) {
  SymmetricMatrix x(n);
  auto rng = seed.stream();
  auto& upper = x.upper();
  std::size_t t = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) upper[t++] = draw_entry(spec, i, j, rng);
  return x;
}

IndexPairSet sample_pair_set(std::size_t n, std::size_t k, const SeedContext& seed) {
  const std::size_t total = pair_count(n);
  if (k > total) {
    throw DomainError("cannot draw k=" + std::to_string(k) + " pairs from " + std::to_string(total) +
                      " positions (N=" + std::to_string(n) + ")");
  }
  IndexPairSet out{n, {}};
  out.pairs.reserve(k);
  auto rng = seed.stream();
  // Partial Fisher-Yates on the implicit array [0, total); only displaced slots are stored.
  std::unordered_map<std::size_t, std::size_t> displaced;
  displaced.reserve(2 * k);
  auto slot = [&](std::size_t pos) {
    auto it = displaced.find(pos);
    return it == displaced.end() ? pos : it->second;
  };
  for (std::size_t t = 0; t < k; ++t) {
    const std::size_t r = t + static_cast<std::size_t>(rng.below(total - t));
    const std::size_t chosen = slot(r);
    displaced[r] = slot(t);
    out.pairs.push_back(pair_from_index(n, chosen));
  }
  return out;
}

SymmetricMatrix apply_resample(const SymmetricMatrix& x, const IndexPairSet& s, const EntrySpec& spec,
                               const SeedContext& seed) {
  if (s.dim != x.dim()) throw DomainError("pair set dimension does not match matrix");
  SymmetricMatrix out = x;
  auto rng = seed.stream();
  for (auto [i, j] : s.pairs) {
    if (i > j || j >= x.dim()) throw DomainError("pair set contains an invalid position");
    out.upper()[pair_index(x.dim(), i, j)] = draw_entry(spec, i, j, rng);
  }
  return out;
}

SymmetricMatrix resample_single(const SymmetricMatrix& x, std::size_t i, std::size_t j, const EntrySpec& spec,
                                const SeedContext& seed) {
  if (i > j || j >= x.dim()) throw DomainError("resample_single needs 0 <= i <= j < N");
  auto rng = seed.stream();
  return replace_entry(x, i, j, draw_entry(spec, i, j, rng));
}

SymmetricMatrix replace_entry(const SymmetricMatrix& x, std::size_t i, std::size_t j, double value) {
  SymmetricMatrix out = x;
  out.set(i, j, value);
  return out;
}

}  // namespace wnoise
