#include "ucm/factor.hpp"

#include <algorithm>
#include <limits>

namespace ucm {

namespace {

std::size_t saturating_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) return std::numeric_limits<std::size_t>::max();
  return a * b;
}

/// Row-major strides of `f`, re-expressed for the variables of `scope`
/// (zero where `f` does not mention the variable).
std::vector<std::size_t> strides_in(const Factor& f, const std::vector<std::size_t>& scope) {
  std::vector<std::size_t> own(f.scope.size());
  std::size_t stride = 1;
  for (std::size_t i = f.scope.size(); i-- > 0;) {
    own[i] = stride;
    stride *= f.cards[i];
  }
  std::vector<std::size_t> out(scope.size(), 0);
  for (std::size_t i = 0; i < scope.size(); ++i) {
    auto it = std::find(f.scope.begin(), f.scope.end(), scope[i]);
    if (it != f.scope.end()) out[i] = own[static_cast<std::size_t>(it - f.scope.begin())];
  }
  return out;
}

}  // namespace

bool Factor::contains(std::size_t var) const {
  return std::find(scope.begin(), scope.end(), var) != scope.end();
}

std::size_t table_size(const std::vector<std::size_t>& cards) {
  std::size_t n = 1;
  for (std::size_t c : cards) n = saturating_mul(n, c);
  return n;
}

std::size_t product_size(const std::vector<const Factor*>& factors) {
  std::vector<std::size_t> seen;
  std::size_t n = 1;
  for (const Factor* f : factors) {
    for (std::size_t i = 0; i < f->scope.size(); ++i) {
      if (std::find(seen.begin(), seen.end(), f->scope[i]) != seen.end()) continue;
      seen.push_back(f->scope[i]);
      n = saturating_mul(n, f->cards[i]);
    }
  }
  return n;
}

Factor factor_product(const Factor& a, const Factor& b) {
  Factor out;
  out.scope = a.scope;
  out.cards = a.cards;
  for (std::size_t i = 0; i < b.scope.size(); ++i) {
    if (!a.contains(b.scope[i])) {
      out.scope.push_back(b.scope[i]);
      out.cards.push_back(b.cards[i]);
    }
  }
  const std::size_t n = table_size(out.cards);
  out.table.resize(static_cast<Eigen::Index>(n));

  const auto sa = strides_in(a, out.scope);
  const auto sb = strides_in(b, out.scope);
  std::vector<std::size_t> digit(out.scope.size(), 0);
  std::size_t ia = 0, ib = 0;
  for (std::size_t i = 0; i < n; ++i) {
    out.table[static_cast<Eigen::Index>(i)] = a.table[static_cast<Eigen::Index>(ia)] * b.table[static_cast<Eigen::Index>(ib)];
    // odometer increment, last variable fastest
    for (std::size_t d = out.scope.size(); d-- > 0;) {
      if (++digit[d] < out.cards[d]) {
        ia += sa[d];
        ib += sb[d];
        break;
      }
      ia -= sa[d] * (out.cards[d] - 1);
      ib -= sb[d] * (out.cards[d] - 1);
      digit[d] = 0;
    }
  }
  return out;
}

Factor sum_out(const Factor& f, std::size_t var) {
  auto it = std::find(f.scope.begin(), f.scope.end(), var);
  if (it == f.scope.end()) return f;
  const std::size_t pos = static_cast<std::size_t>(it - f.scope.begin());

  std::size_t inner = 1;
  for (std::size_t i = pos + 1; i < f.scope.size(); ++i) inner *= f.cards[i];
  const std::size_t card = f.cards[pos];
  const std::size_t outer = f.size() / (inner * card);

  Factor out;
  out.scope = f.scope;
  out.cards = f.cards;
  out.scope.erase(out.scope.begin() + static_cast<std::ptrdiff_t>(pos));
  out.cards.erase(out.cards.begin() + static_cast<std::ptrdiff_t>(pos));
  out.table = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(outer * inner));
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t s = 0; s < card; ++s)
      out.table.segment(static_cast<Eigen::Index>(o * inner), static_cast<Eigen::Index>(inner)) +=
          f.table.segment(static_cast<Eigen::Index>((o * card + s) * inner), static_cast<Eigen::Index>(inner));
  return out;
}

Factor reduce(const Factor& f, std::size_t var, std::size_t state) {
  auto it = std::find(f.scope.begin(), f.scope.end(), var);
  if (it == f.scope.end()) return f;
  const std::size_t pos = static_cast<std::size_t>(it - f.scope.begin());

  std::size_t inner = 1;
  for (std::size_t i = pos + 1; i < f.scope.size(); ++i) inner *= f.cards[i];
  const std::size_t card = f.cards[pos];
  const std::size_t outer = f.size() / (inner * card);

  Factor out;
  out.scope = f.scope;
  out.cards = f.cards;
  out.scope.erase(out.scope.begin() + static_cast<std::ptrdiff_t>(pos));
  out.cards.erase(out.cards.begin() + static_cast<std::ptrdiff_t>(pos));
  out.table.resize(static_cast<Eigen::Index>(outer * inner));
  for (std::size_t o = 0; o < outer; ++o)
    out.table.segment(static_cast<Eigen::Index>(o * inner), static_cast<Eigen::Index>(inner)) =
        f.table.segment(static_cast<Eigen::Index>((o * card + state) * inner), static_cast<Eigen::Index>(inner));
  return out;
}

}  // namespace ucm
