#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "unicent/exact.hpp"

namespace unicent {
namespace counts {

// Monic irreducibles of degree r over F_Q with nonzero roots.
BigInt N(const BigInt& Q, unsigned r);

// Degree-r monic irreducibles over F_{q^2} fixed by the tilde conjugation
// (parameterized by the subfield size q).
BigInt Nsim(const BigInt& q, unsigned r);

// Degree-r monic irreducibles over F_Q fixed by the star conjugation.
BigInt Nstar(const BigInt& Q, unsigned r);

// Unordered pairs {f, f*} of degree-r monic irreducibles over F_Q, f != f*.
BigInt Mstar(const BigInt& Q, unsigned r);

// U*-irreducible polynomial counts over F_{q^2} by type; r is the degree of
// each irreducible factor (block degree 2r for A/B/C and 4r for D).
BigInt A(const BigInt& q, unsigned r);
BigInt B(const BigInt& q, unsigned r);
BigInt C(const BigInt& q, unsigned r);
BigInt D(const BigInt& q, unsigned r);

struct NUminusValue {
  BigInt value;
  bool exact = false;  // false: value is a lower bound

  std::string str() const;
};

// Count of Type D polynomials of the given degree 4r whose root order has
// the maximal possible 2-part. Exact (q^{2r}-1)/(8r) when r is a power of
// two, otherwise a tagged lower bound ceil(N(q^2,r)/8).
NUminusValue NU_minus(const BigInt& q, unsigned degree);

// eta(q,r) defined by 4rD(q,r) = (q^{2r}-1) - eta(q,r)(q^r-1).
Rational eta(const BigInt& q, unsigned r);

struct CountClaim {
  std::string name;
  std::string params;
  std::string lhs;
  std::string relation;
  std::string rhs;
  bool pass = false;
};

struct CountRow {
  BigInt q;
  unsigned r = 0;
  BigInt N_q;       // N(q, r)
  BigInt N_q2;      // N(q^2, r)
  BigInt Nsim_q;    // N~(q, r)
  BigInt Nstar_q2;  // N*(q^2, r)
  BigInt Mstar_q2;  // M*(q^2, r)
  BigInt A, B, C, D;
  NUminusValue NU_minus;  // degree 4r
  Rational eta;
  bool identities_ok = false;
};

struct CountReport {
  std::string title;
  std::string param_range;
  std::vector<CountRow> rows;
  std::vector<CountClaim> claims;

  bool all_pass() const;
  std::size_t failures() const;
  std::string to_table() const;
  std::string to_csv() const;
  std::string to_json() const;
};

CountRow count_row(const BigInt& q, unsigned r);

// Every identity and inequality relating the counting functions, evaluated
// exactly over the grid qs x {1..r_max}.
CountReport check_count_identities(const std::vector<BigInt>& qs, unsigned r_max);

// Compares each closed-form count against the size of the corresponding
// exhaustively enumerated polynomial set over F_q / F_{q^2}.
CountReport cross_validate_enumeration(const BigInt& q, unsigned r_max,
                                       std::uint64_t cap = 10000000);

}  // namespace counts
}  // namespace unicent
