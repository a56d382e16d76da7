#include "statcp/matrixinv.hpp"

#include <algorithm>
#include <stdexcept>

namespace statcp {

namespace {

// Signed permutation expansion of the determinant of the submatrix with the
// given rows/cols (in order).
void det_poly(const std::vector<int>& rows, const std::vector<int>& cols,
              MatrixTemplates::Poly& out) {
    const int k = static_cast<int>(rows.size());
    std::vector<int> perm(k);
    for (int i = 0; i < k; ++i) perm[i] = i;
    do {
        int inv = 0;
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                if (perm[i] > perm[j]) ++inv;
        MatrixTemplates::Monomial mo;
        mo.sign = (inv % 2 == 0) ? 1.0 : -1.0;
        for (int i = 0; i < k; ++i) mo.factors.emplace_back(rows[i], cols[perm[i]]);
        out.push_back(std::move(mo));
    } while (std::next_permutation(perm.begin(), perm.end()));
}

} // namespace

double MatrixTemplates::eval(const Poly& p, const std::vector<std::vector<double>>& a) {
    double s = 0.0;
    for (const auto& mo : p) {
        double t = mo.sign;
        for (auto [i, j] : mo.factors) t *= a[i][j];
        s += t;
    }
    return s;
}

MatrixTemplates symbolic_inverse(int n) {
    if (n < 1 || n > kMatrixNMax) throw std::invalid_argument("symbolic_inverse: n out of range");
    MatrixTemplates t;
    t.n = n;
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    det_poly(all, all, t.det);
    t.num.assign(n, std::vector<MatrixTemplates::Poly>(n));
    // b_ij numerator is the (j,i) cofactor: (-1)^{i+j} * minor(j, i).
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (n == 1) {
                t.num[i][j].push_back({1.0, {}});
                continue;
            }
            std::vector<int> rows, cols;
            for (int r = 0; r < n; ++r)
                if (r != j) rows.push_back(r);
            for (int c = 0; c < n; ++c)
                if (c != i) cols.push_back(c);
            MatrixTemplates::Poly minor;
            det_poly(rows, cols, minor);
            double sgn = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            for (auto& mo : minor) mo.sign *= sgn;
            t.num[i][j] = std::move(minor);
        }
    }
    return t;
}

namespace {

int poly_node(Model& m, const MatrixTemplates::Poly& p,
              const std::vector<std::vector<VarId>>& A) {
    std::vector<int> kids;
    std::vector<double> coef;
    for (const auto& mo : p) {
        if (mo.factors.empty()) {
            // constant monomial (n = 1 numerator)
            kids.push_back(m.nconst(1.0));
            coef.push_back(mo.sign);
            continue;
        }
        int prod = m.nvar(A[mo.factors[0].first][mo.factors[0].second]);
        for (size_t f = 1; f < mo.factors.size(); ++f)
            prod = m.nmul(prod, m.nvar(A[mo.factors[f].first][mo.factors[f].second]));
        kids.push_back(prod);
        coef.push_back(mo.sign);
    }
    return m.nsum(std::move(kids), std::move(coef));
}

} // namespace

VarId post_matrix_inversion(Model& m, const std::vector<std::vector<VarId>>& A,
                            const std::vector<std::vector<VarId>>& B,
                            double det_lo, double det_hi) {
    const int n = static_cast<int>(A.size());
    if (static_cast<int>(B.size()) != n) throw std::invalid_argument("matrix_inversion: shape mismatch");
    MatrixTemplates t = symbolic_inverse(n);
    VarId det = m.add_real("_det" + std::to_string(m.var_count()), det_lo, det_hi);
    m.post_var_eq(det, poly_node(m, t.det, A));
    m.post_rel(m.nsqr(m.nvar(det)), RelOp::Ge, kDetMin * kDetMin);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m.post_rel(m.nsub(m.nmul(m.nvar(B[i][j]), m.nvar(det)), poly_node(m, t.num[i][j], A)),
                       RelOp::Eq, 0.0);
    return det;
}

} // namespace statcp
