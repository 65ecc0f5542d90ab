#include "root_data.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <set>

namespace rootdata {

// ---------------------------------------------------------------------------
// Exact linear algebra on small integer matrices.

long long determinant(Mat m) {
  const int n = static_cast<int>(m.size());
  if (n == 0) return 1;
  long long sign = 1, prev = 1;
  // Bareiss: fraction free, every division below is exact.
  for (int k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      int swap = -1;
      for (int i = k + 1; i < n; ++i)
        if (m[i][k] != 0) {
          swap = i;
          break;
        }
      if (swap < 0) return 0;
      std::swap(m[k], m[swap]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

namespace {

Mat identity(int n) {
  Mat m(n, std::vector<long long>(n, 0));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

long long minorDet(const Mat& m, int dropRow, int dropCol) {
  const int n = static_cast<int>(m.size());
  Mat sub;
  sub.reserve(n - 1);
  for (int i = 0; i < n; ++i) {
    if (i == dropRow) continue;
    std::vector<long long> row;
    row.reserve(n - 1);
    for (int j = 0; j < n; ++j)
      if (j != dropCol) row.push_back(m[i][j]);
    sub.push_back(std::move(row));
  }
  return determinant(sub);
}

}  // namespace

void adjugate(const Mat& m, Mat* adj, long long* det) {
  const int n = static_cast<int>(m.size());
  *det = determinant(m);
  if (*det == 0) throw std::invalid_argument("adjugate of singular matrix");
  adj->assign(n, std::vector<long long>(n, 0));
  if (n == 1) {
    (*adj)[0][0] = 1;
    return;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      long long c = minorDet(m, j, i);
      (*adj)[i][j] = ((i + j) % 2 == 0) ? c : -c;
    }
}

void smithNormalForm(const Mat& m0, Mat* u, Mat* v,
                     std::vector<long long>* diag) {
  const int n = static_cast<int>(m0.size());
  Mat m = m0;
  *u = identity(n);
  *v = identity(n);
  for (int t = 0; t < n; ++t) {
    for (;;) {
      // Pick the entry of least magnitude in the trailing block as pivot.
      int pi = -1, pj = -1;
      for (int i = t; i < n; ++i)
        for (int j = t; j < n; ++j)
          if (m[i][j] != 0 &&
              (pi < 0 || std::llabs(m[i][j]) < std::llabs(m[pi][pj]))) {
            pi = i;
            pj = j;
          }
      if (pi < 0) break;  // trailing block is zero
      if (pi != t) {
        std::swap(m[pi], m[t]);
        std::swap((*u)[pi], (*u)[t]);
      }
      if (pj != t) {
        for (int i = 0; i < n; ++i) {
          std::swap(m[i][pj], m[i][t]);
          std::swap((*v)[i][pj], (*v)[i][t]);
        }
      }
      bool clean = true;
      for (int i = t + 1; i < n; ++i) {
        long long q = m[i][t] / m[t][t];
        if (q != 0)
          for (int j = 0; j < n; ++j) {
            m[i][j] -= q * m[t][j];
            (*u)[i][j] -= q * (*u)[t][j];
          }
        if (m[i][t] != 0) clean = false;
      }
      for (int j = t + 1; j < n; ++j) {
        long long q = m[t][j] / m[t][t];
        if (q != 0)
          for (int i = 0; i < n; ++i) {
            m[i][j] -= q * m[i][t];
            (*v)[i][j] -= q * (*v)[i][t];
          }
        if (m[t][j] != 0) clean = false;
      }
      if (clean) break;
    }
  }
  diag->resize(n);
  for (int i = 0; i < n; ++i) (*diag)[i] = m[i][i];
}

Mat transpose(const Mat& m) {
  const int n = static_cast<int>(m.size());
  Mat t(m.empty() ? 0 : m[0].size(), std::vector<long long>(n, 0));
  for (int i = 0; i < n; ++i)
    for (size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
  return t;
}

Mat matMul(const Mat& a, const Mat& b) {
  const int n = static_cast<int>(a.size());
  const int p = static_cast<int>(b[0].size());
  const int k = static_cast<int>(b.size());
  Mat c(n, std::vector<long long>(p, 0));
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < k; ++l) {
      if (a[i][l] == 0) continue;
      for (int j = 0; j < p; ++j) c[i][j] += a[i][l] * b[l][j];
    }
  return c;
}

Coweight vecMat(const Coweight& v, const Mat& m) {
  Coweight r(m[0].size(), 0);
  for (size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    for (size_t j = 0; j < r.size(); ++j) r[j] += v[i] * m[i][j];
  }
  return r;
}

// ---------------------------------------------------------------------------
// Cartan matrices.

Mat cartanMatrix(char family, int rank) {
  auto chain = [](int r) {
    Mat a(r, std::vector<long long>(r, 0));
    for (int i = 0; i < r; ++i) {
      a[i][i] = 2;
      if (i + 1 < r) a[i][i + 1] = a[i + 1][i] = -1;
    }
    return a;
  };
  switch (family) {
    case 'A':
      if (rank < 1) throw UnknownType("A requires rank >= 1");
      return chain(rank);
    case 'B': {
      if (rank < 2) throw UnknownType("B requires rank >= 2");
      Mat a = chain(rank);
      a[rank - 1][rank - 2] = -2;  // the short node reflects twice
      return a;
    }
    case 'C': {
      if (rank < 2) throw UnknownType("C requires rank >= 2");
      Mat a = chain(rank);
      a[rank - 2][rank - 1] = -2;
      return a;
    }
    case 'D': {
      if (rank < 3) throw UnknownType("D requires rank >= 3");
      Mat a = chain(rank - 1);
      a.resize(rank);
      a[rank - 1].assign(rank, 0);
      for (int i = 0; i + 1 < rank; ++i) a[i].push_back(0);
      a[rank - 1][rank - 1] = 2;
      a[rank - 2][rank - 1] = a[rank - 1][rank - 2] = 0;
      a[rank - 3][rank - 1] = a[rank - 1][rank - 3] = -1;
      return a;
    }
    case 'E': {
      if (rank < 6 || rank > 8) throw UnknownType("E requires rank 6..8");
      Mat a(rank, std::vector<long long>(rank, 0));
      for (int i = 0; i < rank; ++i) a[i][i] = 2;
      auto edge = [&](int i, int j) { a[i - 1][j - 1] = a[j - 1][i - 1] = -1; };
      edge(1, 3);
      edge(2, 4);
      edge(3, 4);
      edge(4, 5);
      edge(5, 6);
      if (rank >= 7) edge(6, 7);
      if (rank == 8) edge(7, 8);
      return a;
    }
    case 'F': {
      if (rank != 4) throw UnknownType("F requires rank 4");
      Mat a = chain(4);
      a[2][1] = -2;
      return a;
    }
    case 'G': {
      if (rank != 2) throw UnknownType("G requires rank 2");
      return {{2, -3}, {-1, 2}};
    }
    default:
      throw UnknownType(std::string("unknown family '") + family + "'");
  }
}

// ---------------------------------------------------------------------------
// Root enumeration.  Works from the Cartan matrix alone, tracking root and
// coroot coordinates in parallel under simple reflections.

namespace {

struct RawRoot {
  std::vector<long long> c;  // root coords
  Coweight e;                // coroot coords
};

std::vector<RawRoot> enumerateRaw(const Mat& a, size_t cap) {
  const int r = static_cast<int>(a.size());
  std::set<std::vector<long long>> seen;
  std::vector<RawRoot> out;
  std::queue<RawRoot> work;
  for (int i = 0; i < r; ++i) {
    RawRoot root;
    root.c.assign(r, 0);
    root.e.assign(r, 0);
    root.c[i] = root.e[i] = 1;
    seen.insert(root.c);
    out.push_back(root);
    work.push(root);
  }
  while (!work.empty()) {
    RawRoot cur = work.front();
    work.pop();
    for (int i = 0; i < r; ++i) {
      long long p = 0, pc = 0;
      for (int j = 0; j < r; ++j) {
        p += a[i][j] * cur.c[j];   // <coroot_i, a>
        pc += cur.e[j] * a[j][i];  // <a-check, alpha_i>
      }
      RawRoot nxt = cur;
      nxt.c[i] -= p;
      nxt.e[i] -= pc;
      if (std::any_of(nxt.c.begin(), nxt.c.end(),
                      [](long long x) { return x < 0; }))
        continue;  // crossed to the negatives (only happens for simples)
      if (seen.insert(nxt.c).second) {
        out.push_back(nxt);
        work.push(nxt);
        if (out.size() > cap)
          throw NotSymmetrizable("root enumeration did not close up");
      }
    }
  }
  return out;
}

long long lcm(long long x, long long y) { return x / std::gcd(x, y) * y; }

}  // namespace

std::vector<long long> minimalSymmetrizer(const Mat& a) {
  const int r = static_cast<int>(a.size());
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(a[i].size()) != r || a[i][i] != 2)
      throw NotSymmetrizable("not a generalized Cartan matrix");
    for (int j = 0; j < r; ++j)
      if (i != j && (a[i][j] > 0 || ((a[i][j] == 0) != (a[j][i] == 0))))
        throw NotSymmetrizable("not a generalized Cartan matrix");
  }
  // Work per connected component of the Dynkin diagram.
  std::vector<int> comp(r, -1);
  int ncomp = 0;
  for (int s = 0; s < r; ++s) {
    if (comp[s] >= 0) continue;
    std::queue<int> bfs;
    bfs.push(s);
    comp[s] = ncomp;
    while (!bfs.empty()) {
      int x = bfs.front();
      bfs.pop();
      for (int j = 0; j < r; ++j)
        if (a[x][j] != 0 && comp[j] < 0) {
          comp[j] = ncomp;
          bfs.push(j);
        }
    }
    ++ncomp;
  }
  std::vector<long long> d(r, 0);
  for (int c = 0; c < ncomp; ++c) {
    std::vector<int> nodes;
    for (int i = 0; i < r; ++i)
      if (comp[i] == c) nodes.push_back(i);
    Mat sub(nodes.size(), std::vector<long long>(nodes.size()));
    for (size_t i = 0; i < nodes.size(); ++i)
      for (size_t j = 0; j < nodes.size(); ++j) sub[i][j] = a[nodes[i]][nodes[j]];
    auto roots = enumerateRaw(sub, 300);
    // The highest root's coordinates give marks m, its coroot's give
    // comarks; the symmetrizer is proportional to comark/mark.
    const RawRoot* theta = &roots[0];
    long long best = 0;
    for (const auto& rt : roots) {
      long long h = std::accumulate(rt.c.begin(), rt.c.end(), 0LL);
      if (h > best) {
        best = h;
        theta = &rt;
      }
    }
    long long scale = 1;
    for (size_t i = 0; i < nodes.size(); ++i) scale = lcm(scale, theta->c[i]);
    std::vector<long long> comp_d(nodes.size());
    long long g = 0;
    for (size_t i = 0; i < nodes.size(); ++i) {
      long long num = theta->e[i] * scale;
      if (num % theta->c[i] != 0)
        throw NotSymmetrizable("mark ratio is not integral");
      comp_d[i] = num / theta->c[i];
      g = std::gcd(g, comp_d[i]);
    }
    for (size_t i = 0; i < nodes.size(); ++i) d[nodes[i]] = comp_d[i] / g;
  }
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      if (d[i] * a[i][j] != d[j] * a[j][i])
        throw NotSymmetrizable("no diagonal symmetrizer exists");
  return d;
}

CartanDatum datumFromMatrix(Mat cartan, const std::string& name) {
  CartanDatum datum;
  datum.rank = static_cast<int>(cartan.size());
  datum.d = minimalSymmetrizer(cartan);
  datum.dDual = minimalSymmetrizer(transpose(cartan));
  datum.cartan = std::move(cartan);
  datum.name = name;
  return datum;
}

CartanDatum cartanFromType(const std::string& type) {
  if (type.size() < 2) throw UnknownType("malformed type '" + type + "'");
  char family = type[0];
  int rank = 0;
  try {
    size_t used = 0;
    rank = std::stoi(type.substr(1), &used);
    if (used != type.size() - 1) throw std::invalid_argument("trailing junk");
  } catch (const std::exception&) {
    throw UnknownType("malformed type '" + type + "'");
  }
  return datumFromMatrix(cartanMatrix(family, rank), type);
}

CartanDatum dualDatum(const CartanDatum& datum) {
  CartanDatum dual;
  dual.rank = datum.rank;
  dual.cartan = transpose(datum.cartan);
  dual.d = datum.dDual;
  dual.dDual = datum.d;
  dual.name = datum.name + "^";
  return dual;
}

// ---------------------------------------------------------------------------
// Twists.

RootContext buildTwist(const CartanDatum& datum,
                       const std::vector<long long>& q, int n) {
  const int r = datum.rank;
  if (static_cast<int>(q.size()) != r)
    throw InconsistentQ("Q must list one value per simple coroot");
  if (n < 1) throw std::invalid_argument("n must be positive");
  for (long long x : q)
    if (x < 1) throw InconsistentQ("Q values must be positive");
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      if (q[i] * datum.cartan[j][i] != q[j] * datum.cartan[i][j])
        throw InconsistentQ("Q is not W-invariant for this Cartan matrix");

  RootContext ctx;
  ctx.datum = datum;
  ctx.n = n;
  ctx.qSimple = q;
  ctx.nSimple.resize(r);
  for (int i = 0; i < r; ++i)
    ctx.nSimple[i] = static_cast<int>(n / std::gcd<long long>(n, q[i]));
  ctx.bform.assign(r, std::vector<long long>(r, 0));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) ctx.bform[i][j] = q[i] * datum.cartan[j][i];

  auto raw = enumerateRaw(datum.cartan, 300);
  ctx.positiveRoots.reserve(raw.size());
  for (const auto& rr : raw) {
    Root root;
    root.rootCoords = rr.c;
    root.corootCoords = rr.e;
    root.height = std::accumulate(rr.c.begin(), rr.c.end(), 0LL);
    Coweight be = vecMat(rr.e, ctx.bform);
    long long bee = 0;
    for (int j = 0; j < r; ++j) bee += be[j] * rr.e[j];
    if (bee % 2 != 0) throw std::logic_error("odd B(y, y)");
    root.qValue = bee / 2;
    root.nCoroot = static_cast<int>(n / std::gcd<long long>(n, root.qValue));
    for (int i = 0; i < r; ++i)
      if (root.height == 1 && rr.c[i] == 1) root.simpleIndex = i;
    ctx.positiveRoots.push_back(std::move(root));
  }
  std::sort(ctx.positiveRoots.begin(), ctx.positiveRoots.end(),
            [](const Root& x, const Root& y) {
              if (x.height != y.height) return x.height < y.height;
              return x.rootCoords < y.rootCoords;
            });

  ctx.twoRho.assign(r, 0);
  ctx.twoRhoTilde.assign(r, 0);
  long long bestHeight = -1;
  for (size_t idx = 0; idx < ctx.positiveRoots.size(); ++idx) {
    const Root& root = ctx.positiveRoots[idx];
    for (int j = 0; j < r; ++j) {
      ctx.twoRho[j] += root.corootCoords[j];
      ctx.twoRhoTilde[j] += root.nCoroot * root.corootCoords[j];
    }
    if (root.height > bestHeight) {
      bestHeight = root.height;
      ctx.highestRoot = static_cast<int>(idx);
    }
  }
  // Twisted height of a/n_a is (sum_j c_j n_j) / n_a; compare as fractions.
  ctx.twistedHighest = 0;
  auto twistedNum = [&](const Root& root) {
    long long s = 0;
    for (int j = 0; j < r; ++j) s += root.rootCoords[j] * ctx.nSimple[j];
    return s;
  };
  for (size_t idx = 1; idx < ctx.positiveRoots.size(); ++idx) {
    const Root& cand = ctx.positiveRoots[idx];
    const Root& best = ctx.positiveRoots[ctx.twistedHighest];
    if (twistedNum(cand) * best.nCoroot > twistedNum(best) * cand.nCoroot)
      ctx.twistedHighest = static_cast<int>(idx);
  }

  // The lattice on which B is divisible by n, via a diagonalization
  // u * B * v = s: solutions of B y = 0 (mod n) are spanned by the columns
  // of v scaled by n / gcd(n, s_k).
  Mat u, v;
  std::vector<long long> s;
  smithNormalForm(ctx.bform, &u, &v, &s);
  ctx.tildeBasis.assign(r, std::vector<long long>(r, 0));
  for (int k = 0; k < r; ++k) {
    long long scale = n / std::gcd<long long>(n, std::llabs(s[k]));
    for (int j = 0; j < r; ++j) ctx.tildeBasis[k][j] = scale * v[j][k];
  }
  long long indexTilde = std::llabs(determinant(ctx.tildeBasis));
  long long indexSpan = 1;
  for (int i = 0; i < r; ++i) indexSpan *= ctx.nSimple[i];
  ctx.simplyConnected = (indexTilde == indexSpan);
  if (ctx.simplyConnected) {
    // Same lattice, nicer basis: use the rescaled coroots themselves.
    ctx.tildeBasis.assign(r, std::vector<long long>(r, 0));
    for (int i = 0; i < r; ++i) ctx.tildeBasis[i][i] = ctx.nSimple[i];
  }

  ctx.twistedCartan.assign(r, std::vector<long long>(r, 0));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      long long num = static_cast<long long>(ctx.nSimple[i]) * datum.cartan[i][j];
      if (num % ctx.nSimple[j] != 0)
        throw std::logic_error("twisted Cartan matrix is not integral");
      ctx.twistedCartan[i][j] = num / ctx.nSimple[j];
    }

  adjugate(datum.cartan, &ctx.cartanAdj, &ctx.cartanDet);

  if (ctx.simplyConnected) {
    long long cells = 1;
    for (int i = 0; i < r; ++i) cells *= ctx.nSimple[i];
    if (cells <= (1 << 20)) {
      std::vector<long long> p(r, 0);
      for (long long it = 0; it < cells; ++it) {
        long long t = it;
        for (int i = 0; i < r; ++i) {
          p[i] = t % ctx.nSimple[i];
          t /= ctx.nSimple[i];
        }
        Coweight x(r);
        bool integral = true;
        for (int j = 0; j < r && integral; ++j) {
          long long num = 0;
          for (int i = 0; i < r; ++i) num += p[i] * ctx.cartanAdj[i][j];
          if (num % ctx.cartanDet != 0)
            integral = false;
          else
            x[j] = num / ctx.cartanDet;
        }
        if (integral) ctx.box.push_back(x);
      }
      std::sort(ctx.box.begin(), ctx.box.end(),
                [](const Coweight& x, const Coweight& y) {
                  long long sx = std::accumulate(x.begin(), x.end(), 0LL);
                  long long sy = std::accumulate(y.begin(), y.end(), 0LL);
                  if (sx != sy) return sx < sy;
                  return x < y;
                });
    }
  }
  return ctx;
}

RootContext buildPrimitiveTwist(const CartanDatum& datum, int n,
                                long long multiple) {
  // The unique W-invariant form with value 1 on short coroots is the
  // minimal symmetrizer of the transposed Cartan matrix.
  std::vector<long long> q = datum.dDual;
  for (auto& x : q) x *= multiple;
  return buildTwist(datum, q, n);
}

LTwist lTwistData(const CartanDatum& datum, int l) {
  LTwist result;
  result.li.resize(datum.rank);
  for (int i = 0; i < datum.rank; ++i)
    result.li[i] = l / std::gcd<long long>(l, datum.d[i]);
  result.ctx = buildPrimitiveTwist(dualDatum(datum), l);
  for (int i = 0; i < datum.rank; ++i)
    if (result.ctx.nSimple[i] != result.li[i])
      throw std::logic_error("l-twist does not match the dual primitive twist");
  return result;
}

// ---------------------------------------------------------------------------
// Pairings, dominance, boxes.

std::vector<long long> pairings(const RootContext& ctx, const Coweight& la) {
  return vecMat(la, ctx.datum.cartan);
}

long long rootPairing(const RootContext& ctx, const Coweight& la, int rootIdx) {
  const auto& c = ctx.positiveRoots[rootIdx].rootCoords;
  auto p = pairings(ctx, la);
  long long s = 0;
  for (size_t j = 0; j < c.size(); ++j) s += c[j] * p[j];
  return s;
}

bool isDominant(const RootContext& ctx, const Coweight& la) {
  auto p = pairings(ctx, la);
  return std::all_of(p.begin(), p.end(), [](long long x) { return x >= 0; });
}

bool dominanceLeq(const Coweight& mu, const Coweight& la) {
  for (size_t i = 0; i < mu.size(); ++i)
    if (la[i] - mu[i] < 0) return false;
  return true;
}

bool inTildeLattice(const RootContext& ctx, const Coweight& y) {
  Mat adj;
  long long det;
  adjugate(ctx.tildeBasis, &adj, &det);
  for (int j = 0; j < ctx.rank(); ++j) {
    long long num = 0;
    for (int i = 0; i < ctx.rank(); ++i) num += y[i] * adj[i][j];
    if (num % det != 0) return false;
  }
  return true;
}

std::pair<Coweight, Coweight> boxDecompose(const RootContext& ctx,
                                           const Coweight& la) {
  if (!ctx.simplyConnected)
    throw TwistNotSimplyConnected("box decomposition needs Y~ spanned by the rescaled coroots");
  auto p = pairings(ctx, la);
  for (long long x : p)
    if (x < 0) throw NotDominant("cannot box-decompose " + renderCoweight(la));
  // zeta is pinned down by its pairings: <zeta, alpha_i> must be the
  // largest multiple of n_i at most <lambda, alpha_i>.  Solve for it and
  // check integrality; la0 = la - zeta then lands in the box by design.
  const int r = ctx.rank();
  Coweight la0 = la, zeta(r, 0);
  for (int j = 0; j < r; ++j) {
    long long num = 0;
    for (int i = 0; i < r; ++i)
      num += (p[i] / ctx.nSimple[i]) * ctx.nSimple[i] * ctx.cartanAdj[i][j];
    if (num % ctx.cartanDet != 0)
      throw std::domain_error(renderCoweight(la) +
                              " is not (box element) + (dominant Y~ element)");
    zeta[j] = num / ctx.cartanDet;
    la0[j] -= zeta[j];
  }
  return {la0, zeta};
}

std::string renderCoweight(const Coweight& la) {
  std::string s;
  for (size_t i = 0; i < la.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(la[i]);
  }
  return s;
}

}  // namespace rootdata
