#include <gtest/gtest.h>

#include "lagrep/spectra.hpp"

using namespace lagrep;

namespace {

SpectrumTuple tuple(std::vector<std::vector<double>> rows) { return SpectrumTuple(std::move(rows)); }

bool has(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

TEST(Index, Examples) {
  EXPECT_EQ(index(tuple({{0, 0}, {0, 0}, {0, 0}})), 0.0);
  EXPECT_DOUBLE_EQ(index(tuple({{.25, .75}, {.25, .75}, {.25, .75}})), 3.0);
  EXPECT_THROW(integer_index(tuple({{.25, .75}, {.25, .75}, {.25, .8}})), InputError);
}

TEST(SpectrumTuple, Validation) {
  EXPECT_THROW(tuple({{0.5, 0.2}}), InputError);
  EXPECT_THROW(tuple({{0.5, 1.0}}), InputError);
  EXPECT_THROW(tuple({{0.5}, {0.1, 0.2}}), InputError);
}

TEST(Normalize, Examples) {
  EXPECT_EQ(normalize({{0.2, 1.0}}).row(0), (std::vector<double>{0.0, 0.2}));
  auto canon = tuple({{0.1, 0.3}, {0.0, 0.9}});
  EXPECT_EQ(normalize(canon.rows()), canon);
  EXPECT_EQ(normalize({{1.0, 1.0}}).row(0), (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(normalize({{0.7, 0.1, 0.4}}).row(0), (std::vector<double>{0.1, 0.4, 0.7}));
  EXPECT_THROW(normalize({{1.2, 0.1}}), InputError);
  EXPECT_THROW(normalize({{-0.1, 0.1}}), InputError);
}

TEST(Normalize, Idempotent) {
  Rng rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::vector<double>> raw(3, std::vector<double>(3));
    for (auto& r : raw)
      for (auto& v : r) v = trial % 5 == 0 ? 1.0 : u(rng);
    auto once = normalize(raw);
    EXPECT_EQ(normalize(once.rows()), once);
  }
}

TEST(Multiplicity, Examples) {
  auto m = multiplicity_structure(tuple({{.1, .2, .3}, {.4, .5, .6}}));
  EXPECT_EQ(m.partitions[0], (std::vector<int>{0, 1, 2, 3}));
  EXPECT_EQ(m.length(1), 3);
  EXPECT_TRUE(m.z.empty());

  auto z = multiplicity_structure(tuple({{0, 0, .5}}));
  EXPECT_EQ(z.partitions[0], (std::vector<int>{0, 2, 3}));
  EXPECT_TRUE(z.in_z(0));
  EXPECT_EQ(z.multiplicities(0), (std::vector<int>{2, 1}));
  EXPECT_EQ(z.sum_squares(), 5);
}

TEST(Multiplicity, NoiseClustersLikeExactTarget) {
  auto exact = tuple({{0.0, 0.25, 0.25}, {0.5, 0.5, 0.5}});
  auto noisy = tuple({{1e-10, 0.25 - 3e-9, 0.25 + 2e-9}, {0.5, 0.5 + 1e-9, 0.5 + 4e-9}});
  EXPECT_EQ(multiplicity_structure(noisy), multiplicity_structure(exact));
  auto wrap = tuple({{0.0, 0.3, 1.0 - 1e-9}});
  auto mw = multiplicity_structure(wrap);
  EXPECT_EQ(mw.partitions[0], (std::vector<int>{0, 2, 3}));
  EXPECT_TRUE(mw.in_z(0));
}

TEST(CollapseTop, ZeroRowMergesIntoZeroCluster) {
  // Row (0, 0.9) has its smallest angle at zero: the top cluster joins the
  // zero cluster.
  auto a = tuple({{0.0, 0.9}, {0.3, 0.6}});
  auto m = multiplicity_structure(a);
  auto r = collapse_top(a, m, 0);
  EXPECT_EQ(r.tuple.row(0), (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(r.structure.partitions[0], (std::vector<int>{0, 2}));
  EXPECT_TRUE(r.structure.in_z(0));
  EXPECT_EQ(r.index_drop, 1);
  EXPECT_EQ(r.tuple.row(1), a.row(1));
}

TEST(CollapseTop, NonZeroRowGainsZeroCluster) {
  auto a = tuple({{0.3, 0.9}, {0.2, 0.7}});
  auto m = multiplicity_structure(a);
  auto r = collapse_top(a, m, 0);
  EXPECT_EQ(r.tuple.row(0), (std::vector<double>{0.0, 0.3}));
  EXPECT_EQ(r.structure.partitions[0], (std::vector<int>{0, 1, 2}));
  EXPECT_TRUE(r.structure.in_z(0));
  EXPECT_EQ(r.index_drop, 1);
  // Index of the limit point (top at 1) minus the index after the wrap.
  const double limit = index(a) + (1.0 - 0.9);
  EXPECT_NEAR(limit - index(r.tuple), 1.0, 1e-14);
}

TEST(CollapseTop, ClusterOfTwo) {
  auto a = tuple({{0.0, 0.4, 0.8, 0.8}});
  auto r = collapse_top(a, multiplicity_structure(a), 0);
  EXPECT_EQ(r.tuple.row(0), (std::vector<double>{0.0, 0.0, 0.0, 0.4}));
  EXPECT_EQ(r.structure.partitions[0], (std::vector<int>{0, 3, 4}));
  EXPECT_EQ(r.index_drop, 2);
  // The result is consistent with clustering the new tuple directly.
  EXPECT_EQ(r.structure, multiplicity_structure(r.tuple));
}

TEST(CollapseTop, TwiceDropsByEachClusterSize) {
  auto a = tuple({{0.1, 0.5, 0.5}, {0.2, 0.3, 0.9}});
  auto r1 = collapse_top(a, multiplicity_structure(a), 0);
  EXPECT_EQ(r1.index_drop, 2);
  EXPECT_EQ(r1.structure, multiplicity_structure(r1.tuple));
  auto r2 = collapse_top(r1.tuple, r1.structure, 0);
  EXPECT_EQ(r2.index_drop, 1);
  EXPECT_EQ(r2.tuple.row(0), (std::vector<double>{0.0, 0.0, 0.0}));
  EXPECT_EQ(r2.structure, multiplicity_structure(r2.tuple));
  EXPECT_NEAR(index(a) + 2 * 0.5 - 2 - index(r1.tuple), 0.0, 1e-14);
  EXPECT_NEAR(index(r1.tuple) + 0.9 - 1 - index(r2.tuple), 0.0, 1e-14);
}

TEST(CollapseTop, Errors) {
  auto a = tuple({{0.3, 0.9}});
  EXPECT_THROW(collapse_top(a, multiplicity_structure(a), 1), InputError);
  auto zero = tuple({{0.0, 0.0}});
  EXPECT_THROW(collapse_top(zero, multiplicity_structure(zero), 0), InputError);
}

TEST(RelativeIndex, Examples) {
  auto a = tuple({{.2, .7}, {.1, .5}, {.1, .4}});
  PartitionSelection all{2, {{0, 1}, {0, 1}, {0, 1}}};
  EXPECT_DOUBLE_EQ(relative_index(a, all), index(a));
  EXPECT_NEAR(bracket_value(a, {2, 1, 1}), 0.9, 1e-15);
  PartitionSelection one{1, {{1}, {0}, {0}}};
  EXPECT_NEAR(relative_index(a, one), 0.9, 1e-15);
  EXPECT_THROW(relative_index(a, PartitionSelection{1, {{0, 1}, {0}, {0}}}), InputError);
  EXPECT_THROW(relative_index(a, PartitionSelection{1, {{0}, {0}}}), InputError);
}

TEST(RelativeIndex, Duality) {
  Rng rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 4;
    std::vector<std::vector<double>> raw(3, std::vector<double>(n));
    for (auto& r : raw)
      for (auto& v : r) v = u(rng) * 0.999;
    auto a = normalize(raw);
    PartitionSelection p;
    p.k = 1 + trial % (n - 1);
    for (int s = 0; s < 3; ++s) {
      std::vector<int> perm{0, 1, 2, 3};
      std::shuffle(perm.begin(), perm.end(), rng);
      p.subsets.emplace_back(perm.begin(), perm.begin() + p.k);
    }
    EXPECT_NEAR(relative_index(a, p) + relative_index(a, p.complement(n)), index(a), 1e-12);
  }
}

TEST(FeasibleU2, Examples) {
  auto f1 = feasible_u2(tuple({{.25, .75}, {.25, .75}, {.25, .75}}));
  EXPECT_TRUE(f1.feasible);
  EXPECT_TRUE(f1.violated.empty());

  auto f2 = feasible_u2(tuple({{.05, .95}, {.2, .3}, {.2, .3}}));
  EXPECT_FALSE(f2.feasible);
  EXPECT_TRUE(has(f2.violated, "[2,1,1]<=1"));

  EXPECT_TRUE(feasible_u2(tuple({{.2, .7}, {.1, .5}, {.1, .4}})).feasible);
}

TEST(FeasibleU2, Errors) {
  EXPECT_THROW(feasible_u2(tuple({{.25, .75}, {.25, .75}})), InputError);
  EXPECT_THROW(feasible_u2(tuple({{.25, .75}, {.25, .75}, {.25, .8}})), InputError);
  EXPECT_THROW(feasible_u2(tuple({{.5, .5}, {.25, .75}, {.25, .75}})), InputError);
  EXPECT_THROW(feasible_u2(tuple({{0, .5}, {.75, .75}, {.25, .75}})), InputError);
}

TEST(FeasibleU2, IndexOutsideRange) {
  auto f = feasible_u2(tuple({{.1, .2}, {.1, .2}, {.1, .3}}));
  EXPECT_FALSE(f.feasible);
  EXPECT_TRUE(has(f.violated, "2<=I<=4"));
}

TEST(FeasibleU3, Examples) {
  EXPECT_THROW(feasible_u3(tuple({{1. / 6, .5, 5. / 6}, {1. / 6, .5, 5. / 6}, {1. / 6, .5, 5. / 6}})),
               InputError);
  const std::vector<double> row{1. / 12, 4. / 12, 7. / 12};
  auto a = tuple({row, row, row});
  EXPECT_NEAR(bracket_value(a, {3, 1, 1}), 0.75, 1e-15);
  EXPECT_NEAR(bracket_value(a, {3, 3, 2}), 1.5, 1e-15);
  auto f = feasible_u3(a);
  EXPECT_TRUE(f.feasible) << (f.violated.empty() ? "" : f.violated.front());
}

TEST(FeasibleU3, InvariantUnderDuality) {
  // alpha -> 1 - alpha maps index I to 9 - I and bracket [i,j,k] to
  // 3 - [4-i,4-j,4-k]; the families must map onto each other.
  Rng rng(11);
  std::uniform_int_distribution<int> pick(1, 23);
  int checked = 0;
  while (checked < 400) {
    std::vector<std::vector<double>> raw(3), dual(3);
    for (std::size_t s = 0; s < 3; ++s) {
      std::vector<int> k;
      while (k.size() < 3) {
        const int v = pick(rng);
        if (std::find(k.begin(), k.end(), v) == k.end()) k.push_back(v);
      }
      std::sort(k.begin(), k.end());
      for (int v : k) raw[s].push_back(v / 24.0);
      for (auto it = k.rbegin(); it != k.rend(); ++it) dual[s].push_back(1.0 - *it / 24.0);
    }
    auto a = tuple(raw);
    const double i = index(a);
    if (std::fabs(i - std::round(i)) > 1e-9 || i < 2.5 || i > 6.5) continue;
    EXPECT_EQ(feasible_u3(a).feasible, feasible_u3(tuple(dual)).feasible);
    ++checked;
  }
}

TEST(FeasibleU3, DetectsAFeasibleIndexFourPoint) {
  // A grid point at I = 4 satisfying every family member.
  auto b = tuple({{.1, .45, .75}, {.15, .45, .75}, {.2, .4, .75}});
  EXPECT_NEAR(index(b), 4.0, 1e-12);
  auto f = feasible_u3(b);
  EXPECT_TRUE(f.feasible) << (f.violated.empty() ? "" : f.violated.front());
}

TEST(Feasible, PermutationInvariant) {
  Rng rng(3);
  std::uniform_int_distribution<int> pick(1, 19);
  int checked = 0;
  while (checked < 200) {
    std::vector<std::vector<double>> raw(3, std::vector<double>(2));
    for (auto& r : raw) {
      r[0] = pick(rng) * 0.05;
      do r[1] = pick(rng) * 0.05;
      while (r[1] == r[0]);
    }
    auto a = normalize(raw);
    const double i = index(a);
    if (std::fabs(i - std::round(i)) > 1e-9) continue;
    ++checked;
    auto base = feasible_u2(a);
    std::vector<int> perm{0, 1, 2};
    while (std::next_permutation(perm.begin(), perm.end())) {
      auto rows = a.rows();
      std::vector<std::vector<double>> p{rows[perm[0]], rows[perm[1]], rows[perm[2]]};
      EXPECT_EQ(feasible_u2(tuple(p)).feasible, base.feasible);
      EXPECT_EQ(feasible_u2(tuple(p)).violated.size(), base.violated.size());
    }
  }
}

TEST(WallFamily, NamesAndClosure) {
  auto w = wall_family(2, 2);
  ASSERT_EQ(w.size(), 3u);
  EXPECT_EQ(w[0].name(), "[1,1,2]<=1");
  EXPECT_EQ(wall_family(2, 3).size(), 4u);
  EXPECT_TRUE(wall_family(2, 5).empty());
  EXPECT_THROW(wall_family(4, 4), InputError);
}

TEST(IndexBounds, Examples) {
  auto zero = tuple({{0, 0}, {0, 0}, {0, 0}});
  EXPECT_TRUE(index_bounds_ok(zero, 2, 6));
  EXPECT_TRUE(index_bounds_ok(tuple({{.25, .75}, {.25, .75}, {.25, .75}}), 0, 0));
  EXPECT_FALSE(index_bounds_ok(tuple({{.1, .2}, {.1, .2}, {.1, .2}}), 0, 0));
  EXPECT_FALSE(index_bounds_ok(tuple({{.8, .9}, {.8, .9}, {.85, .85}}), 0, 0));
}

TEST(ExpectedStructure, Generic) {
  auto m = generic_structure(3, 2);
  EXPECT_EQ(m.sum_squares(), 6);
}
