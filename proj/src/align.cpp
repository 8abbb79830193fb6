#include "refix/align.hpp"

#include "refix/lexer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace refix {

namespace {

constexpr double kForbidden = 1e9;
constexpr double kEps = 1e-12;

bool digitsIn(const std::string &s, size_t from, bool allowZero) {
  if (from >= s.size()) return false;
  for (size_t i = from; i < s.size(); ++i) {
    char c = s[i];
    if (c < '0' || c > '9') return false;
    if (!allowZero && c == '0') return false;
  }
  return true;
}

} // namespace

bool isWildcardToken(const std::string &s) {
  static const std::string p = "_WILDCARD_";
  return s.rfind(p, 0) == 0 && digitsIn(s, p.size(), false);
}

bool isAbstractToken(const std::string &s) {
  static const std::string p = "_ABSTRACT_";
  return s.rfind(p, 0) == 0 && digitsIn(s, p.size(), false);
}

bool isPatternVarToken(const std::string &s) {
  return s.size() > 2 && s[0] == '$' && s[1] == 'v' && digitsIn(s, 2, true);
}

bool isSpecialToken(const std::string &s) {
  return isWildcardToken(s) || isAbstractToken(s) || isPatternVarToken(s);
}

bool Binding::bindCheck(const std::string &tok, const std::string &concrete) {
  auto it = map.find(tok);
  if (it != map.end()) return it->second == concrete;
  map.emplace(tok, concrete);
  return true;
}

namespace {

std::vector<std::string> valueTokens(const std::string &v) {
  SourceText src(v);
  std::vector<std::string> out;
  for (const Token &t : tokenize(src)) {
    if (t.kind == TokenKind::End) break;
    out.push_back(t.text);
  }
  return out;
}

bool concreteTokenOk(const std::string &t) { return !isSpecialToken(t); }

bool matchTokenPair(const std::string &p, const std::string &c, const AbstractDefs *defs,
                    Binding *binding) {
  if (isWildcardToken(p) || isPatternVarToken(p)) {
    if (!concreteTokenOk(c)) return p == c;
    return binding ? binding->bindCheck(p, c) : true;
  }
  if (isAbstractToken(p)) {
    if (!concreteTokenOk(c)) return p == c;
    if (defs) {
      auto it = defs->find(p);
      if (it == defs->end() || !it->second.count(normalizeForCompare(Role::TargetType, c)))
        return false;
    }
    return binding ? binding->bindCheck(p, c) : true;
  }
  return p == c;
}

} // namespace

bool matchValues(Role role, const std::string &xVal, const std::string &yVal,
                 const AbstractDefs *defs, Binding *binding, bool symmetric) {
  std::string xs = normalizeForCompare(role, xVal);
  std::string ys = normalizeForCompare(role, yVal);
  if (xs == ys) return true;
  std::vector<std::string> xt = valueTokens(xs);
  std::vector<std::string> yt = valueTokens(ys);
  if (xt.size() != yt.size() || xt.empty()) return false;
  for (size_t i = 0; i < xt.size(); ++i) {
    if (xt[i] == yt[i]) continue;
    if (isSpecialToken(xt[i])) {
      if (!matchTokenPair(xt[i], yt[i], defs, binding)) return false;
      continue;
    }
    if (symmetric && isSpecialToken(yt[i])) {
      if (!matchTokenPair(yt[i], xt[i], defs, binding)) return false;
      continue;
    }
    return false;
  }
  return true;
}

double componentFraction(const ApgNode &x, const ApgNode &y, FractionMode mode,
                         const AbstractDefs *defs, Binding *binding, bool symmetric) {
  // Per-role positional pairing: k-th component of a role on one side pairs
  // with the k-th of the same role on the other.
  static const Role kRoles[] = {Role::CalleeName, Role::ReceiverName, Role::ReceiverType,
                                Role::TargetType, Role::DeclaredType, Role::VarName,
                                Role::ArgCount,   Role::ArgSummary,   Role::Operator,
                                Role::LiteralKind};
  int countX = 0, countY = 0, matched = 0;
  for (Role r : kRoles) {
    std::vector<const Component *> xs, ys;
    for (const auto &c : x.components)
      if (c.role == r) xs.push_back(&c);
    for (const auto &c : y.components)
      if (c.role == r) ys.push_back(&c);
    size_t k = std::max(xs.size(), ys.size());
    for (size_t i = 0; i < k; ++i) {
      const Component *xc = i < xs.size() ? xs[i] : nullptr;
      const Component *yc = i < ys.size() ? ys[i] : nullptr;
      if (xc && yc) {
        ++countX;
        ++countY;
        if (matchValues(r, xc->value, yc->value, defs, binding, symmetric)) ++matched;
      } else if (xc) {
        if (!xc->inferred) ++countX; // inferred-vs-absent compares equal
      } else if (yc) {
        if (!yc->inferred) ++countY;
      }
    }
  }
  if (mode == FractionMode::Pattern) return countX == 0 ? 1.0 : double(matched) / countX;
  int denom = std::max(countX, countY);
  return denom == 0 ? 1.0 : double(matched) / denom;
}

bool kindsCompatible(ApgKind a, ApgKind b) {
  if (a == b) return true;
  auto declish = [](ApgKind k) { return k == ApgKind::VarDecl || k == ApgKind::Assignment; };
  return declish(a) && declish(b);
}

namespace {

// --- Zhang-Shasha tree edit distance with mapping recovery ---------------

struct Indexed {
  std::vector<int> post;  // postorder position -> apg node id
  std::vector<int> lml;   // postorder position -> leftmost-leaf position
  std::vector<int> keyroots;
};

Indexed indexTree(const Apg &t) {
  Indexed ix;
  std::function<int(int)> walk = [&](int id) -> int {
    int first = -1;
    for (int c : t.nodes[id].children) {
      if (!t.nodes[c].alive) continue;
      int f = walk(c);
      if (first < 0) first = f;
    }
    ix.post.push_back(id);
    int me = static_cast<int>(ix.post.size()) - 1;
    ix.lml.push_back(first < 0 ? me : first);
    return first < 0 ? me : first;
  };
  walk(t.root);
  int n = static_cast<int>(ix.post.size());
  std::vector<char> isKey(n, 1);
  for (int i = 0; i < n; ++i) {
    // A node is a keyroot iff no later node shares its leftmost leaf.
    for (int j = i + 1; j < n; ++j)
      if (ix.lml[j] == ix.lml[i]) {
        isKey[i] = 0;
        break;
      }
  }
  for (int i = 0; i < n; ++i)
    if (isKey[i]) ix.keyroots.push_back(i);
  return ix;
}

class Zs {
public:
  Zs(const Apg &x, const Apg &y, const AbstractDefs *defs)
      : x_(x), y_(y), defs_(defs), ix_(indexTree(x)), iy_(indexTree(y)) {
    n_ = static_cast<int>(ix_.post.size());
    m_ = static_cast<int>(iy_.post.size());
    td_.assign(n_, std::vector<double>(m_, 0));
    for (int ki : ix_.keyroots)
      for (int kj : iy_.keyroots) forest(ki, kj, nullptr);
  }

  double cost() const { return td_[n_ - 1][m_ - 1]; }

  std::vector<std::pair<int, int>> mapping() {
    std::vector<std::pair<int, int>> out;
    recover(n_ - 1, m_ - 1, out);
    std::sort(out.begin(), out.end());
    return out;
  }

private:
  const Apg &x_;
  const Apg &y_;
  const AbstractDefs *defs_;
  Indexed ix_, iy_;
  int n_ = 0, m_ = 0;
  std::vector<std::vector<double>> td_;

  double rename(int i, int j) const {
    const ApgNode &a = x_.nodes[ix_.post[i]];
    const ApgNode &b = y_.nodes[iy_.post[j]];
    bool ar = a.kind == ApgKind::Root, br = b.kind == ApgKind::Root;
    if (ar && br) return 0;
    if (ar || br) return kForbidden;
    if (!kindsCompatible(a.kind, b.kind)) return 1.0;
    return 1.0 - componentFraction(a, b, FractionMode::Cost, defs_, nullptr, true);
  }

  // Forest distance for subtrees rooted at postorder positions i, j. When
  // `fd` is given the matrix is kept for backtracking.
  void forest(int i, int j, std::vector<std::vector<double>> *fd) {
    int li = ix_.lml[i], lj = iy_.lml[j];
    int w = i - li + 2, h = j - lj + 2;
    std::vector<std::vector<double>> local(w, std::vector<double>(h, 0));
    for (int a = 1; a < w; ++a) local[a][0] = local[a - 1][0] + 1;
    for (int b = 1; b < h; ++b) local[0][b] = local[0][b - 1] + 1;
    for (int a = 1; a < w; ++a) {
      for (int b = 1; b < h; ++b) {
        int ai = li + a - 1, bj = lj + b - 1;
        if (ix_.lml[ai] == li && iy_.lml[bj] == lj) {
          local[a][b] = std::min({local[a - 1][b] + 1, local[a][b - 1] + 1,
                                  local[a - 1][b - 1] + rename(ai, bj)});
          td_[ai][bj] = local[a][b];
        } else {
          local[a][b] = std::min({local[a - 1][b] + 1, local[a][b - 1] + 1,
                                  local[ix_.lml[ai] - li][iy_.lml[bj] - lj] + td_[ai][bj]});
        }
      }
    }
    if (fd) *fd = std::move(local);
  }

  void recover(int i, int j, std::vector<std::pair<int, int>> &out) {
    std::vector<std::vector<double>> fd;
    forest(i, j, &fd);
    int li = ix_.lml[i], lj = iy_.lml[j];
    int a = i - li + 1, b = j - lj + 1;
    while (a > 0 || b > 0) {
      if (a > 0 && std::fabs(fd[a][b] - (fd[a - 1][b] + 1)) < kEps) {
        --a; // x node deleted
        continue;
      }
      if (b > 0 && std::fabs(fd[a][b] - (fd[a][b - 1] + 1)) < kEps) {
        --b; // y node inserted
        continue;
      }
      int ai = li + a - 1, bj = lj + b - 1;
      if (ix_.lml[ai] == li && iy_.lml[bj] == lj) {
        out.emplace_back(ix_.post[ai], iy_.post[bj]);
        --a;
        --b;
      } else {
        recover(ai, bj, out);
        a = ix_.lml[ai] - li;
        b = iy_.lml[bj] - lj;
      }
    }
  }
};

} // namespace

Alignment alignApgs(const Apg &x, const Apg &y, const AbstractDefs *defs) {
  Zs zs(x, y, defs);
  Alignment al;
  al.cost = zs.cost();
  al.matchedNodes = zs.mapping();

  // Order correspondence extraction by x-preorder for deterministic
  // first-wins token pairs.
  std::map<int, int> byX(al.matchedNodes.begin(), al.matchedNodes.end());
  for (int xid : x.preorder()) {
    auto it = byX.find(xid);
    if (it == byX.end()) continue;
    const ApgNode &a = x.nodes[xid];
    const ApgNode &b = y.nodes[it->second];
    if (a.kind == ApgKind::Root || b.kind == ApgKind::Root) continue;
    if (!kindsCompatible(a.kind, b.kind)) continue;
    al.lineMap.emplace(a.sourceLine, b.sourceLine);
    static const Role kRoles[] = {Role::CalleeName, Role::ReceiverName, Role::ReceiverType,
                                  Role::TargetType, Role::DeclaredType, Role::VarName,
                                  Role::ArgCount,   Role::ArgSummary,   Role::Operator,
                                  Role::LiteralKind};
    for (Role r : kRoles) {
      std::vector<const Component *> xs, ys;
      for (const auto &c : a.components)
        if (c.role == r) xs.push_back(&c);
      for (const auto &c : b.components)
        if (c.role == r) ys.push_back(&c);
      for (size_t k = 0; k < std::min(xs.size(), ys.size()); ++k) {
        al.corrValues.push_back({xs[k]->value, ys[k]->value});
        auto xt = valueTokens(xs[k]->value);
        auto yt = valueTokens(ys[k]->value);
        if (xt.size() != yt.size()) continue;
        for (size_t p = 0; p < xt.size(); ++p) {
          if (xt[p] == yt[p]) continue;
          al.tokenMap.emplace(xt[p], yt[p]);
        }
      }
    }
  }
  return al;
}

double bruteForceEditDistance(const Apg &x, const Apg &y, const AbstractDefs *defs) {
  std::vector<int> xs = x.preorder();
  std::vector<int> ys = y.preorder();
  int n = static_cast<int>(xs.size());
  int m = static_cast<int>(ys.size());

  auto renameCost = [&](int a, int b) -> double {
    const ApgNode &na = x.nodes[xs[a]];
    const ApgNode &nb = y.nodes[ys[b]];
    bool ar = na.kind == ApgKind::Root, br = nb.kind == ApgKind::Root;
    if (ar && br) return 0;
    if (ar || br) return kForbidden;
    if (!kindsCompatible(na.kind, nb.kind)) return 1.0;
    return 1.0 - componentFraction(na, nb, FractionMode::Cost, defs, nullptr, true);
  };

  // Preorder index intervals per subtree let us check ancestry cheaply.
  auto subtreeEnd = [](const Apg &t, const std::vector<int> &order) {
    std::map<int, int> posOf;
    for (int i = 0; i < static_cast<int>(order.size()); ++i) posOf[order[i]] = i;
    std::vector<int> end(order.size());
    std::function<int(int)> walk = [&](int id) -> int {
      int e = posOf[id];
      for (int c : t.nodes[id].children)
        if (t.nodes[c].alive) e = std::max(e, walk(c));
      end[posOf[id]] = e;
      return e;
    };
    walk(t.root);
    return end;
  };
  std::vector<int> endX = subtreeEnd(x, xs);
  std::vector<int> endY = subtreeEnd(y, ys);

  auto ancX = [&](int a, int b) { return a < b && endX[a] >= b; }; // a is ancestor of b
  auto ancY = [&](int a, int b) { return a < b && endY[a] >= b; };

  double best = std::numeric_limits<double>::infinity();
  std::vector<int> match(n, -1);
  std::function<void(int, double, int)> go = [&](int i, double acc, int usedY) {
    if (acc >= best) return;
    if (i == n) {
      int unmatchedY = m;
      for (int v : match)
        if (v >= 0) --unmatchedY;
      best = std::min(best, acc + unmatchedY);
      return;
    }
    // Option: delete x node i.
    go(i + 1, acc + 1, usedY);
    // Option: map to any y node j preserving order and ancestry.
    for (int j = 0; j < m; ++j) {
      bool ok = true;
      for (int k = 0; k < i && ok; ++k) {
        if (match[k] < 0) continue;
        bool aX = ancX(k, i), aY = ancY(match[k], j);
        if (aX != aY) ok = false;
        // Preorder mapping must preserve left-to-right order too.
        if (!aX && match[k] >= j) ok = false;
      }
      if (!ok) continue;
      double rc = renameCost(i, j);
      if (rc >= kForbidden) continue;
      match[i] = j;
      go(i + 1, acc + rc, usedY + 1);
      match[i] = -1;
    }
  };
  go(0, 0, 0);
  return best;
}

SimilarityScore similarity(const Apg &pattern, const Apg &snippet, const AbstractDefs *defs,
                           Binding &binding) {
  Alignment al = alignApgs(pattern, snippet, defs);
  std::map<int, int> byX(al.matchedNodes.begin(), al.matchedNodes.end());
  SimilarityScore score;
  double sum = 0;
  int count = 0;
  for (int pid : pattern.preorder()) {
    const ApgNode &pn = pattern.nodes[pid];
    if (pn.kind == ApgKind::Root) continue;
    ++count;
    double f = 0;
    auto it = byX.find(pid);
    if (it != byX.end() && kindsCompatible(pn.kind, snippet.nodes[it->second].kind))
      f = componentFraction(pn, snippet.nodes[it->second], FractionMode::Pattern, defs,
                            &binding, false);
    score.perNodeBreakdown.emplace_back(pid, f);
    sum += f;
  }
  score.value = count == 0 ? 0.0 : sum / count;
  return score;
}

double snippetDistance(const Apg &a, const Apg &b, const AbstractDefs *defs) {
  // Canonical operand order makes the measure symmetric by construction.
  std::string ka = outline(a), kb = outline(b);
  const Apg &x = kb < ka ? b : a;
  const Apg &y = kb < ka ? a : b;
  int nx = x.liveCount(), ny = y.liveCount();
  int denom = std::max(nx, ny);
  if (denom == 0) return 0.0;
  Alignment al = alignApgs(x, y, defs);
  double sum = 0;
  for (auto &p : al.matchedNodes) {
    const ApgNode &na = x.nodes[p.first];
    const ApgNode &nb = y.nodes[p.second];
    if (na.kind == ApgKind::Root || nb.kind == ApgKind::Root) continue;
    if (!kindsCompatible(na.kind, nb.kind)) continue;
    sum += componentFraction(na, nb, FractionMode::Cost, defs, nullptr, true);
  }
  double sym = sum / denom;
  double d = 1.0 - sym;
  if (d < 0) d = 0;
  if (d > 1) d = 1;
  return d;
}

} // namespace refix
