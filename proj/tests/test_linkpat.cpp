#include <gtest/gtest.h>

#include "loopcurrent/linkpat.hpp"
#include "loopcurrent/yangbaxter.hpp"

using namespace lc;

namespace {
LinkPattern lp(const char* s) { return LinkPattern::parse(s); }

// arcs counted with a plain stack, independent of partners()
int arcs(const std::string& w) {
  int open = 0, n = 0;
  for (char c : w) {
    if (c == '(') ++open;
    else if (open > 0) --open, ++n;
  }
  return n;
}
}  // namespace

TEST(LinkPattern, Indexing) {
  EXPECT_EQ(all_patterns(4).size(), 16u);
  EXPECT_EQ(lp("()").index(), 2u);
  EXPECT_EQ(lp("((").index(), 3u);
  EXPECT_EQ(lp(")(").index(), 1u);
  for (const auto& a : all_patterns(5)) EXPECT_EQ(LinkPattern::parse(a.str()), a);
  EXPECT_THROW(LinkPattern::parse("(x"), std::invalid_argument);
}

TEST(LinkPattern, Partners) {
  auto p = lp(")(()(").partners();
  std::vector<int> want{kLeft, kRight, 3, 2, kRight};
  EXPECT_EQ(p, want);
  for (const auto& a : all_patterns(5)) EXPECT_EQ(LinkPattern::from_partners(a.partners()), a);
}

TEST(Phi, Insertions) {
  EXPECT_EQ(phi_insert(lp(")(()(("), 3).str(), ")(()()((");
  EXPECT_EQ(phi_left(lp("()")).str(), ")()");
  EXPECT_EQ(phi_right(lp("()")).str(), "()(");
  EXPECT_EQ(phi_insert(LinkPattern(0, 0), 1).str(), "()");
  EXPECT_THROW(phi_insert(lp("()"), 0), std::out_of_range);
  EXPECT_THROW(phi_insert(lp("()"), 4), std::out_of_range);
}

TEST(Reflect, Examples) {
  EXPECT_EQ(reflect(lp(")(()()")).str(), "()())(");
  EXPECT_EQ(reflect(lp("()")).str(), "()");
  for (const auto& a : all_patterns(4)) EXPECT_EQ(reflect(reflect(a)), a);
}

TEST(Cap, ClosesLoopOnSmallArc) {
  auto c = cap(lp("(()"), 2);
  EXPECT_TRUE(c.closed_loop);
  EXPECT_EQ(c.pattern.str(), "(");
  auto d = cap(lp(")("), 1);
  EXPECT_FALSE(d.closed_loop);
  EXPECT_EQ(d.pattern.size(), 0);
}

TEST(Glue, TwoArcsCloseUp) {
  auto c = glue(lp("()"), lp("()"));
  EXPECT_EQ(c.loops, 1);
  EXPECT_TRUE(c.strands.empty());
}

TEST(Glue, BoundaryEndsPairBySide) {
  auto c = glue(lp(")("), lp(")("));
  EXPECT_EQ(c.loops, 0);
  ASSERT_EQ(c.strands.size(), 2u);
  for (const auto& s : c.strands) {
    EXPECT_FALSE(s.left_to_right());
    EXPECT_EQ(s.from, s.to);
  }
}

TEST(Glue, SinglePathThroughBothSites) {
  auto c = glue(lp(")("), lp("()"));
  EXPECT_EQ(c.loops, 0);
  ASSERT_EQ(c.strands.size(), 1u);
  EXPECT_TRUE(c.strands[0].left_to_right());
  EXPECT_EQ(c.strands[0].crossings.size(), 2u);
}

TEST(Glue, LoopCountSumsFrozen) {
  // regression constants; each arc of alpha closes onto its mirror image below
  const int frozen[] = {0, 0, 1, 4, 13, 36};
  for (int L = 1; L <= 5; ++L) {
    int total = 0, independent = 0;
    for (const auto& a : all_patterns(L)) {
      total += glue(a, a).loops;
      independent += arcs(a.str());
    }
    EXPECT_EQ(total, frozen[L]) << "L=" << L;
    EXPECT_EQ(total, independent);
  }
}

TEST(Glue, StrandEndsConserved) {
  for (int L = 1; L <= 4; ++L)
    for (const auto& a : all_patterns(L))
      for (const auto& b : all_patterns(L)) {
        auto c = glue(a, b);
        int unmatched = 0;
        for (int x : a.partners()) unmatched += x < 0;
        for (int x : b.partners()) unmatched += x < 0;
        ASSERT_EQ(2 * static_cast<int>(c.strands.size()), unmatched);
        int visited = c.loop_nodes;
        for (const auto& s : c.strands) visited += static_cast<int>(s.crossings.size());
        ASSERT_EQ(visited, L) << a.str() << " / " << b.str();
        ASSERT_GE(c.loops, 0);
      }
}

TEST(SignedCrossings, NoCarrierNoCurrent) {
  auto c = glue(lp(")("), lp(")("));
  for (int k = 1; k <= 2; ++k) EXPECT_EQ(signed_crossings(c, MarkedEdge::column(k)), 0);
  auto d = glue(lp("()"), lp("()"));
  EXPECT_EQ(signed_crossings(d, MarkedEdge::column(1)), 0);
}

TEST(SignedCrossings, OppositeColumns) {
  auto c = glue(lp(")("), lp("()"));
  int a = signed_crossings(c, MarkedEdge::column(1));
  int b = signed_crossings(c, MarkedEdge::column(2));
  EXPECT_EQ(std::abs(a), 1);
  EXPECT_EQ(a, -b);
}

TEST(SignedCrossings, MarkerOrderAntisymmetry) {
  CrossingConvention flipped{-kCrossSign, -kCrossSign};
  for (const auto& a : all_patterns(3))
    for (const auto& b : all_patterns(3)) {
      auto c = glue(a, b);
      for (int k = 1; k <= 3; ++k)
        EXPECT_EQ(signed_crossings(c, MarkedEdge::column(k), flipped), -signed_crossings(c, MarkedEdge::column(k)));
    }
}

TEST(SignedCrossings, PerPathColumnTotals) {
  for (int L = 1; L <= 4; ++L)
    for (const auto& a : all_patterns(L))
      for (const auto& b : all_patterns(L)) {
        auto c = glue(a, b);
        for (int k = 1; k <= L; ++k) {
          int v = signed_crossings(c, MarkedEdge::column(k));
          ASSERT_GE(v, -1);
          ASSERT_LE(v, 1);
          ASSERT_EQ(v, kappa_X(k, a, b));
        }
      }
}

TEST(SignedCrossings, NetCurrentAlternates) {
  // one left-right path at most; its signed column crossings alternate along the path
  for (const auto& a : all_patterns(4))
    for (const auto& b : all_patterns(4)) {
      auto c = glue(a, b);
      for (const auto& s : c.strands) {
        if (!s.left_to_right()) continue;
        int sum = 0;
        for (const auto& x : s.crossings) sum += x.dir;
        ASSERT_LE(std::abs(sum), 1);
        for (std::size_t i = 1; i < s.crossings.size(); ++i) ASSERT_EQ(s.crossings[i].dir, -s.crossings[i - 1].dir);
      }
    }
}
