#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lc {

// partner codes for strands that end on the strip boundaries
inline constexpr int kLeft = -1;
inline constexpr int kRight = -2;

// a left-to-right path crossing a column edge upward counts +1; east across a horizontal edge counts +1
inline constexpr int kCrossSign = +1;

class LinkPattern {
 public:
  LinkPattern() = default;
  LinkPattern(int size, std::uint32_t index);
  static LinkPattern parse(std::string_view word);
  // inverse of partners(); ')' for left-boundary ends, '(' for right-boundary ends
  static LinkPattern from_partners(const std::vector<int>& partner);

  int size() const { return size_; }
  // leftmost site is the most significant bit, open = 1
  std::uint32_t index() const { return bits_; }
  bool is_open(int site) const { return (bits_ >> (size_ - 1 - site)) & 1u; }
  std::string str() const;
  // 0-based partner of each site, or kLeft / kRight
  std::vector<int> partners() const;

  friend bool operator==(const LinkPattern& a, const LinkPattern& b) {
    return a.size_ == b.size_ && a.bits_ == b.bits_;
  }

 private:
  int size_ = 0;
  std::uint32_t bits_ = 0;
};

std::vector<LinkPattern> all_patterns(int L);

// insert "()" at sites i, i+1 (1-based) of the result; 1 <= i <= alpha.size() + 1
LinkPattern phi_insert(const LinkPattern& alpha, int i);
// phi_0 prepends ')', phi_L appends '('
LinkPattern phi_left(const LinkPattern& alpha);
LinkPattern phi_right(const LinkPattern& alpha);

LinkPattern reflect(const LinkPattern& alpha);

// joins the strands at sites i, i+1 (1-based) of an upward pattern and drops the two sites
struct CapResult {
  LinkPattern pattern;
  bool closed_loop = false;
};
CapResult cap(const LinkPattern& alpha, int i);

// --- partner-array moves (0-based positions), shared by the operator builders

// connects the strands through positions a and b, then removes nothing; returns true if they closed a loop
bool join_through(std::vector<int>& partner, int a, int b);
// e_j on positions j, j+1: join the old strands, put a fresh arc on (j, j+1); returns loops closed
int apply_e(std::vector<int>& partner, int j);
// send position p and whatever it was joined to onto boundary side (kLeft or kRight)
void send_to_boundary(std::vector<int>& partner, int p, int side);
// drop positions in [from, from+count) which must no longer be referenced
std::vector<int> erase_positions(const std::vector<int>& partner, int from, int count);

// --- strand diagrams with oriented nodes

struct MarkedEdge {
  enum class Kind { column, horizontal };
  // column: bottom = gluing line / lower row sites, middle = between the rows, top = upper sites
  // horizontal: bottom = lower row, top = upper row
  enum class Level { bottom, middle, top };
  Kind kind = Kind::column;
  int k = 1;
  Level level = Level::bottom;

  static MarkedEdge column(int k, Level lv = Level::bottom) { return {Kind::column, k, lv}; }
  static MarkedEdge horizontal(int k, Level lv = Level::bottom) { return {Kind::horizontal, k, lv}; }
  friend bool operator==(const MarkedEdge&, const MarkedEdge&) = default;
};

struct Crossing {
  int node = 0;
  int dir = +1;  // +1 when entered through port 0 (upward / eastward)
};

struct Strand {
  int from = kLeft, to = kLeft;
  std::vector<Crossing> crossings;
  bool left_to_right() const { return from == kLeft && to == kRight; }
};

struct Connectivity {
  int sites = 0;
  std::vector<MarkedEdge> node_edge;  // label of each node
  std::vector<Strand> strands;        // boundary-to-boundary strands only
  int loops = 0;
  int loop_nodes = 0;
};

// which way a path traverses a node: port 0 is below / west, port 1 above / east
struct Port {
  int node;
  int port;
};

class StrandGraph {
 public:
  explicit StrandGraph(int nodes) : link_(2 * nodes, kOpen) {}
  int nodes() const { return static_cast<int>(link_.size() / 2); }
  void link(Port a, Port b) {
    link_[slot(a)] = slot(b);
    link_[slot(b)] = slot(a);
  }
  void to_boundary(Port a, int side) { link_[slot(a)] = side == kLeft ? kLeftSlot : kRightSlot; }
  bool is_open(Port a) const { return link_[slot(a)] == kOpen; }

  // walk from an entry port; stops at a boundary or an open port
  struct Walk {
    int end_kind;  // kLeft, kRight, or kOpenEnd
    Port end{0, 0};
  };
  static constexpr int kOpenEnd = -3;
  template <class Visit>
  Walk walk(Port entry, Visit&& visit) const {
    Port cur = entry;
    for (;;) {
      visit(cur.node, cur.port == 0 ? +1 : -1);
      Port out{cur.node, 1 - cur.port};
      int nxt = link_[slot(out)];
      if (nxt == kLeftSlot) return {kLeft, out};
      if (nxt == kRightSlot) return {kRight, out};
      if (nxt == kOpen) return {kOpenEnd, out};
      cur = Port{nxt / 2, nxt % 2};
    }
  }
  // the port linked to p, if it is linked to a node
  int partner_slot(Port p) const { return link_[slot(p)]; }
  static constexpr int kOpen = -1;
  static constexpr int kLeftSlot = -2;
  static constexpr int kRightSlot = -3;

  // every boundary-to-boundary strand plus the closed-loop count; open ports must not exist
  Connectivity trace(std::vector<MarkedEdge> labels, int sites) const;
  // number of closed cycles among nodes not reached from any boundary or open port
  int count_loops() const;

 private:
  static int slot(Port p) { return 2 * p.node + p.port; }
  std::vector<int> link_;
};

// upward alpha above the line, downward beta below; node k-1 is site k with port 0 on beta's side
Connectivity glue(const LinkPattern& alpha, const LinkPattern& beta);

struct CrossingConvention {
  int column = kCrossSign;
  int horizontal = kCrossSign;
};

int signed_crossings(const Connectivity& c, const MarkedEdge& e, const CrossingConvention& conv = {});

}  // namespace lc
