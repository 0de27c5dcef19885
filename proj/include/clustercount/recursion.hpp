#pragma once

// Point counting by leaf removal. For a leaf f with neighbor g,
//
//   N_T(alpha) = q * N_T''(alpha'') + sum_{beta in F_q^*} N_T'(alpha'(beta)),
//
// the first term being the x_f = 0 locus and the sum the x_f != 0 locus.
// Every sub-instance is normalized and canonicalized before the memo lookup,
// which collapses the q-1 children of the sum into a few classes.

#include <clustercount/coeffreduce.hpp>
#include <clustercount/count.hpp>
#include <clustercount/enumerate.hpp>
#include <clustercount/treegraph.hpp>

#include <mutex>
#include <string>
#include <unordered_map>

namespace clustercount {

class RecursiveCounter {
 public:
  explicit RecursiveCounter(FieldSpec field, bool memoize = true) : field_(std::move(field)), memoize_(memoize) {}

  struct Split {
    vertex_t leaf;
    Count zero_term;     // q * N_T''(alpha'')
    Count nonzero_term;  // sum over beta of N_T'(alpha'(beta))
  };

  Count count(const Forest& f, const CoeffMap& c) {
    require_invertible(c);
    const auto comps = f.components();
    if (comps.size() == 1) return count_tree(f, c);
    Count total = 1;
    for (const auto& comp : comps) {
      total *= count_tree(f.induced(comp), c.restricted(comp));
      if (total == 0) break;
    }
    return total;
  }

  /// Both terms of the recursion at the given leaf, without normalizing first.
  Split split(const Forest& f, const CoeffMap& c, vertex_t leaf) {
    require_invertible(c);
    const auto lr = leaf_removal_transforms(f, c, leaf);
    Split s{leaf, Count(field_.q()) * count(lr.doubleprime, lr.doubleprime_alpha), 0};
    for (code_t beta = 1; beta < field_.q(); ++beta) s.nonzero_term += count(lr.prime, lr.prime_at(beta));
    return s;
  }

  /// The leaf whose removal splits T'' into the most components; ties go to
  /// the smallest index.
  static vertex_t choose_leaf(const Forest& f) {
    std::optional<vertex_t> best;
    for (vertex_t v = 0; v < f.size(); ++v) {
      if (!f.is_leaf(v)) continue;
      if (!best || f.degree(f.neighbors(v).front()) > f.degree(f.neighbors(*best).front())) best = v;
    }
    if (!best) throw Error(ErrorKind::NotALeaf, "tree has no leaf");
    return *best;
  }

  std::size_t memo_size() const {
    std::lock_guard lock(mu_);
    return memo_.size();
  }
  std::size_t evaluations() const { return evaluations_; }
  const FieldSpec& field() const { return field_; }

 private:
  Count count_tree(const Forest& f, const CoeffMap& c) {
    const std::uint32_t q = field_.q();
    if (f.size() == 0) return 1;
    if (f.size() == 1) return c[0] == field_.neg(field_.one()) ? Count(2 * std::uint64_t{q} - 1) : Count(q - 1);

    const NormalForm nf = normalize(f, c);
    const Forest plain = f.relabeled_default();
    std::string key;
    if (memoize_) {
      key = canonical_form(plain, nf.alpha.formatted());
      std::lock_guard lock(mu_);
      if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    }
    ++evaluations_;
    const auto s = split(plain, nf.alpha, choose_leaf(plain));
    Count total = s.zero_term + s.nonzero_term;
    if (memoize_) {
      std::lock_guard lock(mu_);
      memo_[key] = total;
    }
    return total;
  }

  FieldSpec field_;
  bool memoize_;
  mutable std::mutex mu_;
  std::unordered_map<std::string, Count> memo_;
  std::size_t evaluations_ = 0;
};

inline CountReport recursive_count(const VarietyInstance& v, bool memoize = true) {
  detail::Elapsed timer;
  v.validate();
  require_invertible(v.alpha);
  RecursiveCounter rc(v.field(), memoize);
  Count n = rc.count(v.forest, v.alpha);
  return CountReport{v.descriptor(), v.field().q(), "recursion", n, "", timer.ms()};
}

}  // namespace clustercount
