// root_data.hpp
//
// Finite Cartan matrices, their root systems, and metaplectic twists.
//
// A twist is a pair (Q, n): a W-invariant integer quadratic form Q on the
// coroot lattice Y together with a positive integer n.  From it we derive,
// for every coroot, the smallest n(a-check) with n | n(a-check) Q(a-check),
// the sublattice Y~ of Y on which the associated bilinear form B is
// divisible by n, and the twisted Cartan matrix of the rescaled coroots
// n(a-check_i) a-check_i.  When Y~ is exactly the span of those rescaled
// coroots we call the twist simply connected; boxes and box decompositions
// of dominant coweights only make sense in that case.
//
// Everything here is exact integer arithmetic.  Coweights are row vectors
// of coordinates in the simple coroot basis, and all root data is derived
// from the Cartan matrix alone by reflecting simple roots around.

#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rootdata {

struct UnknownType : std::runtime_error {
  explicit UnknownType(const std::string& m) : std::runtime_error(m) {}
};
struct NotSymmetrizable : std::runtime_error {
  explicit NotSymmetrizable(const std::string& m) : std::runtime_error(m) {}
};
struct InconsistentQ : std::runtime_error {
  explicit InconsistentQ(const std::string& m) : std::runtime_error(m) {}
};
struct NotDominant : std::runtime_error {
  explicit NotDominant(const std::string& m) : std::runtime_error(m) {}
};
struct TwistNotSimplyConnected : std::runtime_error {
  explicit TwistNotSimplyConnected(const std::string& m)
      : std::runtime_error(m) {}
};

using Mat = std::vector<std::vector<long long>>;
using Coweight = std::vector<long long>;

// ---------------------------------------------------------------------------
// Small exact linear algebra.

long long determinant(Mat m);
// adj with m * adj = det(m) * I.  Requires det != 0.
void adjugate(const Mat& m, Mat* adj, long long* det);
// Unimodular u, v with u * m * v diagonal (returned in diag).
void smithNormalForm(const Mat& m, Mat* u, Mat* v, std::vector<long long>* diag);
Mat transpose(const Mat& m);
Mat matMul(const Mat& a, const Mat& b);
Coweight vecMat(const Coweight& v, const Mat& m);  // row vector times matrix

// ---------------------------------------------------------------------------
// Cartan data.

struct CartanDatum {
  int rank = 0;
  Mat cartan;                  // a_ij = <coroot_i, root_j>
  std::vector<long long> d;    // minimal symmetrizer: diag(d) * cartan symmetric
  std::vector<long long> dDual;  // same for the transposed matrix
  std::string name;            // "A2", "C3", ... or "custom"
};

// Cartan matrix in Bourbaki numbering for families A..G.  Throws UnknownType
// for anything outside the finite list.
Mat cartanMatrix(char family, int rank);
CartanDatum cartanFromType(const std::string& type);
CartanDatum datumFromMatrix(Mat cartan, const std::string& name = "custom");
CartanDatum dualDatum(const CartanDatum& datum);

// The coprime positive d with diag(d) * cartan symmetric, computed from the
// marks and comarks of the highest root; NotSymmetrizable when no such d
// exists (which for us means the matrix is not of finite type).
std::vector<long long> minimalSymmetrizer(const Mat& cartan);

struct Root {
  std::vector<long long> rootCoords;  // in the simple roots
  Coweight corootCoords;              // its coroot, in the simple coroots
  long long height = 0;               // = <rho-check, a>
  long long qValue = 0;               // Q of the coroot
  int nCoroot = 1;                    // n / gcd(n, qValue)
  int simpleIndex = -1;               // >= 0 when the root is simple
};

// ---------------------------------------------------------------------------
// Twisted context.

struct RootContext {
  CartanDatum datum;
  int n = 1;
  std::vector<long long> qSimple;  // Q on the simple coroots
  std::vector<int> nSimple;        // n(coroot_i)
  Mat bform;                       // B(coroot_i, coroot_j) = Q_i a_ji

  std::vector<Root> positiveRoots;
  int highestRoot = -1;         // index of the highest root
  int twistedHighest = -1;      // root whose twisted image a / n_a is highest
  Coweight twoRho;              // sum of all positive coroots
  Coweight twoRhoTilde;         // sum of n_a * coroot over positive roots

  Mat tildeBasis;               // rows form a basis of Y~
  bool simplyConnected = false;
  Mat twistedCartan;            // Cartan matrix of the rescaled coroots

  // Only filled when simplyConnected: the box representatives sorted by
  // (coordinate sum, lex).
  std::vector<Coweight> box;

  // cartan^-1 = cartanAdj / cartanDet, kept for integrality tests.
  Mat cartanAdj;
  long long cartanDet = 1;

  int rank() const { return datum.rank; }
};

RootContext buildTwist(const CartanDatum& datum, const std::vector<long long>& q,
                       int n);
// Unique Q with value 1 on short coroots, scaled by `multiple`.
RootContext buildPrimitiveTwist(const CartanDatum& datum, int n,
                                long long multiple = 1);

// The l-twist attached to a Cartan datum: l_i = l / gcd(l, d_i), realized as
// the primitive twist of the dual datum (whose per-coroot n values equal the
// l_i; this is asserted).
struct LTwist {
  std::vector<long long> li;
  RootContext ctx;
};
LTwist lTwistData(const CartanDatum& datum, int l);

// ---------------------------------------------------------------------------
// Pairings and order relations.

// <lambda, alpha_j> for all j, i.e. lambda * cartan.
std::vector<long long> pairings(const RootContext& ctx, const Coweight& la);
// <lambda, a> for the positive root with the given index.
long long rootPairing(const RootContext& ctx, const Coweight& la, int rootIdx);
bool isDominant(const RootContext& ctx, const Coweight& la);
// mu <= la in the coroot-lattice dominance order.
bool dominanceLeq(const Coweight& mu, const Coweight& la);
bool inTildeLattice(const RootContext& ctx, const Coweight& y);

// Splits dominant lambda as (box element, dominant element of Y~).  Not
// every dominant coweight splits this way; when none exists the unique
// candidate has fractional coordinates and we throw std::domain_error.
std::pair<Coweight, Coweight> boxDecompose(const RootContext& ctx,
                                           const Coweight& la);

std::string renderCoweight(const Coweight& la);

}  // namespace rootdata
