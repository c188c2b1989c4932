#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace bubblex {

using Q = mpq_class;

// Canonical n/d.
Q ratio(const mpz_class& n, const mpz_class& d);

// Parses "p", "p/q" or "-p/q"; the result is canonical.
Q parse_rational(const std::string& s);

// Canonical lowest-terms string with positive denominator ("3", "-1/2").
std::string to_string(const Q& q);

double to_double(const Q& q);

// Small dense matrices over Q.
using QMatrix = std::vector<std::vector<Q>>;

struct SolveResult {
    enum Status { Unique, Inconsistent, Underdetermined } status;
    QMatrix x;  // cols x rhs, valid when status == Unique
    int rank = 0;
};

// Solves A X = B by Gauss-Jordan elimination with first-nonzero pivoting in
// row order, so results are reproducible bit for bit.
SolveResult solve_linear(const QMatrix& a, const QMatrix& b, int cols);

int matrix_rank(const QMatrix& a, int cols);

}  // namespace bubblex
