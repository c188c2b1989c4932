#include "rational.hpp"

#include <cctype>

#include "errors.hpp"

namespace bubblex {

namespace {

bool is_integer_literal(const std::string& s) {
    size_t i = 0;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

}  // namespace

Q ratio(const mpz_class& n, const mpz_class& d) {
    Q q(n, d);
    q.canonicalize();
    return q;
}

Q parse_rational(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    auto slash = s.find('/');
    std::string num = s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!is_integer_literal(num) || !is_integer_literal(den) || den[0] == '-' || den[0] == '+')
        fail(Err::Parse, "malformed rational '" + raw + "'");
    if (num[0] == '+') num.erase(0, 1);
    mpz_class n(num, 10), d(den, 10);
    if (d == 0) fail(Err::Parse, "zero denominator in '" + raw + "'");
    Q q(n, d);
    q.canonicalize();
    return q;
}

std::string to_string(const Q& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

double to_double(const Q& q) { return q.get_d(); }

namespace {

// Reduces [A | B] in place; returns pivot columns.
std::vector<int> eliminate(QMatrix& a, QMatrix& b, int cols) {
    const int rows = static_cast<int>(a.size());
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int p = -1;
        for (int i = r; i < rows; ++i)
            if (sgn(a[i][c]) != 0) {
                p = i;
                break;
            }
        if (p < 0) continue;
        std::swap(a[p], a[r]);
        std::swap(b[p], b[r]);
        Q inv = 1 / a[r][c];
        for (int j = c; j < cols; ++j) a[r][j] *= inv;
        for (auto& v : b[r]) v *= inv;
        for (int i = 0; i < rows; ++i) {
            if (i == r || sgn(a[i][c]) == 0) continue;
            Q f = a[i][c];
            for (int j = c; j < cols; ++j)
                if (sgn(a[r][j]) != 0) a[i][j] -= f * a[r][j];
            for (size_t j = 0; j < b[i].size(); ++j)
                if (sgn(b[r][j]) != 0) b[i][j] -= f * b[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

}  // namespace

SolveResult solve_linear(const QMatrix& a_in, const QMatrix& b_in, int cols) {
    QMatrix a = a_in, b = b_in;
    const int rows = static_cast<int>(a.size());
    const size_t nrhs = rows > 0 ? b[0].size() : 0;
    auto pivots = eliminate(a, b, cols);
    SolveResult res;
    res.rank = static_cast<int>(pivots.size());
    for (int i = res.rank; i < rows; ++i)
        for (const auto& v : b[i])
            if (sgn(v) != 0) {
                res.status = SolveResult::Inconsistent;
                return res;
            }
    if (res.rank < cols) {
        res.status = SolveResult::Underdetermined;
        return res;
    }
    res.status = SolveResult::Unique;
    res.x.assign(cols, std::vector<Q>(nrhs));
    for (int i = 0; i < res.rank; ++i) res.x[pivots[i]] = b[i];
    return res;
}

int matrix_rank(const QMatrix& a_in, int cols) {
    QMatrix a = a_in;
    QMatrix b(a.size());
    return static_cast<int>(eliminate(a, b, cols).size());
}

}  // namespace bubblex
