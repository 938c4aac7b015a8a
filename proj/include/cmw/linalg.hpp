#ifndef CMW_LINALG_HPP_
#define CMW_LINALG_HPP_

#include <optional>
#include <stdexcept>
#include <vector>

#include "cmw/rational.hpp"

namespace cmw {

/// Dense matrix over the exact complex rationals. Sized for the tiny
/// systems this library solves (Fischer splits, frame changes, rank
/// certificates); no attempt at sparsity.
class CMatrix {
  public:
    CMatrix() : rows_(0), cols_(0) {}
    CMatrix(std::size_t r, std::size_t c)
        : rows_(r), cols_(c), d_(r, std::vector<CRational>(c)) {}

    static CMatrix identity(std::size_t n) {
        CMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = CRational(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    CRational& operator()(std::size_t i, std::size_t j) { return d_[i][j]; }
    const CRational& operator()(std::size_t i, std::size_t j) const { return d_[i][j]; }

    CMatrix operator*(const CMatrix& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("CMatrix: shape mismatch");
        CMatrix r(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                if (d_[i][k].is_zero()) continue;
                for (std::size_t j = 0; j < o.cols_; ++j)
                    r(i, j) += d_[i][k] * o(k, j);
            }
        return r;
    }
    CMatrix operator+(const CMatrix& o) const {
        CMatrix r(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(i, j) = d_[i][j] + o(i, j);
        return r;
    }
    CMatrix operator-(const CMatrix& o) const {
        CMatrix r(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(i, j) = d_[i][j] - o(i, j);
        return r;
    }

    CMatrix conj_transpose() const {
        CMatrix r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = d_[i][j].conj();
        return r;
    }
    CMatrix transpose() const {
        CMatrix r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = d_[i][j];
        return r;
    }

    friend bool operator==(const CMatrix& a, const CMatrix& b) {
        return a.d_ == b.d_;
    }

    /// Row echelon via exact Gauss-Jordan. Returns rank; `rhs` (may be
    /// empty) carries augmented columns through the elimination.
    std::size_t rref(CMatrix* rhs = nullptr) {
        std::size_t rank = 0;
        for (std::size_t col = 0; col < cols_ && rank < rows_; ++col) {
            std::size_t piv = rank;
            while (piv < rows_ && d_[piv][col].is_zero()) ++piv;
            if (piv == rows_) continue;
            std::swap(d_[piv], d_[rank]);
            if (rhs) std::swap(rhs->d_[piv], rhs->d_[rank]);
            CRational inv = CRational(1) / d_[rank][col];
            scale_row(rank, inv);
            if (rhs) rhs->scale_row(rank, inv);
            for (std::size_t i = 0; i < rows_; ++i) {
                if (i == rank || d_[i][col].is_zero()) continue;
                CRational f = d_[i][col];
                axpy_row(i, rank, f);
                if (rhs) rhs->axpy_row(i, rank, f);
            }
            ++rank;
        }
        return rank;
    }

    std::size_t rank() const {
        CMatrix m = *this;
        return m.rref();
    }

    std::optional<CMatrix> inverse() const {
        if (rows_ != cols_) return std::nullopt;
        CMatrix m = *this, id = identity(rows_);
        if (m.rref(&id) != rows_) return std::nullopt;
        return id;
    }

    /// One solution of A x = b, or nullopt if inconsistent. Free variables
    /// are set to zero (deterministic).
    std::optional<std::vector<CRational>> solve(const std::vector<CRational>& b) const {
        if (b.size() != rows_) throw std::invalid_argument("solve: size mismatch");
        CMatrix m = *this;
        CMatrix rhs(rows_, 1);
        for (std::size_t i = 0; i < rows_; ++i) rhs(i, 0) = b[i];
        m.rref(&rhs);
        std::vector<CRational> x(cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            std::size_t lead = cols_;
            for (std::size_t j = 0; j < cols_; ++j)
                if (!m(i, j).is_zero()) { lead = j; break; }
            if (lead == cols_) {
                if (!rhs(i, 0).is_zero()) return std::nullopt;
                continue;
            }
            x[lead] = rhs(i, 0);  // free columns after lead stay zero
            for (std::size_t j = lead + 1; j < cols_; ++j)
                if (!x[j].is_zero()) x[lead] -= m(i, j) * x[j];
        }
        // back-check (free vars may make the naive read-off wrong otherwise)
        for (std::size_t i = 0; i < rows_; ++i) {
            CRational acc;
            for (std::size_t j = 0; j < cols_; ++j) acc += (*this)(i, j) * x[j];
            if (!(acc == b[i])) return std::nullopt;
        }
        return x;
    }

    /// Basis of the right nullspace (free variables set to unit vectors).
    std::vector<std::vector<CRational>> nullspace() const {
        CMatrix m = *this;
        m.rref();
        std::vector<std::size_t> lead_of_row(rows_, cols_);
        std::vector<bool> is_pivot(cols_, false);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (!m(i, j).is_zero()) {
                    lead_of_row[i] = j;
                    is_pivot[j] = true;
                    break;
                }
        std::vector<std::vector<CRational>> basis;
        for (std::size_t f = 0; f < cols_; ++f) {
            if (is_pivot[f]) continue;
            std::vector<CRational> v(cols_);
            v[f] = CRational(1);
            for (std::size_t i = 0; i < rows_; ++i) {
                if (lead_of_row[i] == cols_) continue;
                v[lead_of_row[i]] = -m(i, f);
            }
            basis.push_back(std::move(v));
        }
        return basis;
    }

  private:
    void scale_row(std::size_t i, const CRational& f) {
        for (auto& v : d_[i]) v *= f;
    }
    void axpy_row(std::size_t i, std::size_t src, const CRational& f) {
        for (std::size_t j = 0; j < cols_; ++j) d_[i][j] -= f * d_[src][j];
    }

    std::size_t rows_, cols_;
    std::vector<std::vector<CRational>> d_;
};

}  // namespace cmw

#endif  // CMW_LINALG_HPP_
