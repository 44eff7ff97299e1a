#include "sinkx/intlattice.hpp"

#include <algorithm>
#include <sstream>

namespace sinkx {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw DimensionMismatch(message);
}

std::string join_labels(const Labels& labels) {
    std::string out;
    for (const auto& l : labels) {
        if (!out.empty()) out += ",";
        out += l;
    }
    return out;
}

}  // namespace

Labels abstract_labels(std::size_t n) {
    Labels out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
    return out;
}

IntVector::IntVector(Labels labels) : labels_(std::move(labels)), values_(labels_.size(), Int(0)) {}

IntVector::IntVector(Labels labels, std::vector<Int> values)
    : labels_(std::move(labels)), values_(std::move(values)) {
    require(labels_.size() == values_.size(), "vector labels and values differ in length");
}

const Int& IntVector::at(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    require(it != labels_.end(), "no coordinate labelled '" + label + "'");
    return values_[static_cast<std::size_t>(it - labels_.begin())];
}

Int& IntVector::at(const std::string& label) {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    require(it != labels_.end(), "no coordinate labelled '" + label + "'");
    return values_[static_cast<std::size_t>(it - labels_.begin())];
}

bool IntVector::has_label(const std::string& label) const {
    return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

bool IntVector::is_zero() const {
    return std::all_of(values_.begin(), values_.end(), [](const Int& v) { return v == 0; });
}

IntVector& IntVector::operator+=(const IntVector& rhs) {
    require(labels_ == rhs.labels_, "vector label mismatch: (" + join_labels(labels_) + ") vs (" +
                                        join_labels(rhs.labels_) + ")");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += rhs.values_[i];
    return *this;
}

IntVector& IntVector::operator-=(const IntVector& rhs) {
    require(labels_ == rhs.labels_, "vector label mismatch: (" + join_labels(labels_) + ") vs (" +
                                        join_labels(rhs.labels_) + ")");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= rhs.values_[i];
    return *this;
}

std::string IntVector::to_string() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (i) os << ", ";
        os << values_[i];
    }
    os << ")";
    return os.str();
}

Int dot(const IntVector& a, const IntVector& b) {
    require(a.labels() == b.labels(), "dot product over different label sets");
    Int out = 0;
    for (std::size_t i = 0; i < a.size(); ++i) out += a[i] * b[i];
    return out;
}

IntMatrix::IntMatrix(Labels row_labels, Labels col_labels)
    : row_labels_(std::move(row_labels)),
      col_labels_(std::move(col_labels)),
      data_(row_labels_.size() * col_labels_.size(), Int(0)) {}

IntMatrix IntMatrix::identity(const Labels& labels) {
    IntMatrix m(labels, labels);
    for (std::size_t i = 0; i < labels.size(); ++i) m.at(i, i) = 1;
    return m;
}

const Int& IntMatrix::at(std::size_t i, std::size_t j) const {
    require(i < rows() && j < cols(), "matrix index out of range");
    return data_[i * cols() + j];
}

Int& IntMatrix::at(std::size_t i, std::size_t j) {
    require(i < rows() && j < cols(), "matrix index out of range");
    return data_[i * cols() + j];
}

IntMatrix IntMatrix::transposed() const {
    IntMatrix out(col_labels_, row_labels_);
    for (std::size_t i = 0; i < rows(); ++i)
        for (std::size_t j = 0; j < cols(); ++j) out.at(j, i) = at(i, j);
    return out;
}

IntVector IntMatrix::apply(const IntVector& x) const {
    require(x.labels() == col_labels_, "matrix-vector label mismatch");
    IntVector out(row_labels_);
    for (std::size_t i = 0; i < rows(); ++i) {
        Int acc = 0;
        for (std::size_t j = 0; j < cols(); ++j) acc += at(i, j) * x[j];
        out[i] = acc;
    }
    return out;
}

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const {
    require(col_labels_ == rhs.row_labels_, "matrix product label mismatch");
    IntMatrix out(row_labels_, rhs.col_labels_);
    for (std::size_t i = 0; i < rows(); ++i)
        for (std::size_t k = 0; k < cols(); ++k) {
            if (at(i, k) == 0) continue;
            for (std::size_t j = 0; j < rhs.cols(); ++j) out.at(i, j) += at(i, k) * rhs.at(k, j);
        }
    return out;
}

IntMatrix IntMatrix::operator-(const IntMatrix& rhs) const {
    require(row_labels_ == rhs.row_labels_ && col_labels_ == rhs.col_labels_,
            "matrix difference label mismatch");
    IntMatrix out(row_labels_, col_labels_);
    for (std::size_t i = 0; i < rows(); ++i)
        for (std::size_t j = 0; j < cols(); ++j) out.at(i, j) = at(i, j) - rhs.at(i, j);
    return out;
}

IntMatrix IntMatrix::columns(const std::vector<std::string>& subset) const {
    IntMatrix out(row_labels_, Labels(subset.begin(), subset.end()));
    for (std::size_t jj = 0; jj < subset.size(); ++jj) {
        auto it = std::find(col_labels_.begin(), col_labels_.end(), subset[jj]);
        require(it != col_labels_.end(), "no column labelled '" + subset[jj] + "'");
        auto j = static_cast<std::size_t>(it - col_labels_.begin());
        for (std::size_t i = 0; i < rows(); ++i) out.at(i, jj) = at(i, j);
    }
    return out;
}

IntMatrix IntMatrix::with_row(const std::string& label, const IntVector& row) const {
    require(row.labels() == col_labels_, "appended row has mismatched labels");
    Labels rl = row_labels_;
    rl.push_back(label);
    IntMatrix out(rl, col_labels_);
    for (std::size_t i = 0; i < rows(); ++i)
        for (std::size_t j = 0; j < cols(); ++j) out.at(i, j) = at(i, j);
    for (std::size_t j = 0; j < cols(); ++j) out.at(rows(), j) = row[j];
    return out;
}

std::string IntMatrix::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < rows(); ++i) {
        os << row_labels_[i] << ":";
        for (std::size_t j = 0; j < cols(); ++j) os << " " << at(i, j);
        os << "\n";
    }
    return os.str();
}

std::string AbelianGroup::to_string() const {
    if (free_rank == 0 && torsion.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    if (free_rank == 1) {
        os << "Z";
        first = false;
    } else if (free_rank > 1) {
        os << "Z^" << free_rank;
        first = false;
    }
    for (const auto& t : torsion) {
        if (!first) os << " + ";
        os << "Z/" << t;
        first = false;
    }
    return os.str();
}

namespace {

// Elementary operations applied to the working matrix and mirrored on the
// left (u) and right (v) transforms so that u*a*v == d stays true.
struct SmithState {
    IntMatrix d;
    IntMatrix u;
    IntMatrix v;

    std::size_t rows() const { return d.rows(); }
    std::size_t cols() const { return d.cols(); }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < cols(); ++j) std::swap(d.at(a, j), d.at(b, j));
        for (std::size_t j = 0; j < rows(); ++j) std::swap(u.at(a, j), u.at(b, j));
    }
    void swap_cols(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < rows(); ++i) std::swap(d.at(i, a), d.at(i, b));
        for (std::size_t i = 0; i < cols(); ++i) std::swap(v.at(i, a), v.at(i, b));
    }
    // row[a] += q * row[b]
    void add_row(std::size_t a, std::size_t b, const Int& q) {
        for (std::size_t j = 0; j < cols(); ++j) d.at(a, j) += q * d.at(b, j);
        for (std::size_t j = 0; j < rows(); ++j) u.at(a, j) += q * u.at(b, j);
    }
    // col[a] += q * col[b]
    void add_col(std::size_t a, std::size_t b, const Int& q) {
        for (std::size_t i = 0; i < rows(); ++i) d.at(i, a) += q * d.at(i, b);
        for (std::size_t i = 0; i < cols(); ++i) v.at(i, a) += q * v.at(i, b);
    }
    void negate_row(std::size_t a) {
        for (std::size_t j = 0; j < cols(); ++j) d.at(a, j) = -d.at(a, j);
        for (std::size_t j = 0; j < rows(); ++j) u.at(a, j) = -u.at(a, j);
    }

    bool find_pivot(std::size_t t, std::size_t& pi, std::size_t& pj) const {
        bool found = false;
        Int best;
        for (std::size_t i = t; i < rows(); ++i)
            for (std::size_t j = t; j < cols(); ++j) {
                const Int& x = d.at(i, j);
                if (x == 0) continue;
                Int a = abs(x);
                if (!found || a < best) {
                    found = true;
                    best = a;
                    pi = i;
                    pj = j;
                }
            }
        return found;
    }
};

Int trunc_quotient(const Int& a, const Int& b) {
    Int q;
    mpz_tdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

}  // namespace

SmithDecomposition smith_normal_form(const IntMatrix& a) {
    SmithState s{a, IntMatrix::identity(a.row_labels()), IntMatrix::identity(a.col_labels())};
    const std::size_t m = a.rows(), n = a.cols();

    for (std::size_t t = 0; t < std::min(m, n); ++t) {
        std::size_t pi = 0, pj = 0;
        if (!s.find_pivot(t, pi, pj)) break;
        s.swap_rows(t, pi);
        s.swap_cols(t, pj);

        bool settled = false;
        while (!settled) {
            settled = true;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (s.d.at(i, t) == 0) continue;
                Int q = trunc_quotient(s.d.at(i, t), s.d.at(t, t));
                if (q != 0) s.add_row(i, t, -q);
                if (s.d.at(i, t) != 0) {
                    // remainder is strictly smaller than the pivot
                    s.swap_rows(t, i);
                    settled = false;
                    break;
                }
            }
            if (!settled) continue;
            for (std::size_t j = t + 1; j < n; ++j) {
                if (s.d.at(t, j) == 0) continue;
                Int q = trunc_quotient(s.d.at(t, j), s.d.at(t, t));
                if (q != 0) s.add_col(j, t, -q);
                if (s.d.at(t, j) != 0) {
                    s.swap_cols(t, j);
                    settled = false;
                    break;
                }
            }
            if (!settled) continue;
            // pivot must divide every remaining entry for the chain d1|d2|...
            for (std::size_t i = t + 1; i < m && settled; ++i)
                for (std::size_t j = t + 1; j < n && settled; ++j) {
                    if (s.d.at(i, j) % s.d.at(t, t) != 0) {
                        s.add_row(t, i, 1);
                        settled = false;
                    }
                }
        }
        if (s.d.at(t, t) < 0) s.negate_row(t);
    }
    return SmithDecomposition{s.u, s.d, s.v};
}

namespace {

std::size_t snf_rank(const IntMatrix& d) {
    std::size_t r = 0;
    while (r < std::min(d.rows(), d.cols()) && d.at(r, r) != 0) ++r;
    return r;
}

// Nearest integer to a/b for b > 0, halves rounded up. Used to reduce
// membership solutions against the kernel lattice.
Int round_nearest(const Int& a, const Int& b) {
    Int num = 2 * a + b;
    Int den = 2 * b;
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return q;
}

void reduce_by_kernel(IntVector& x, const std::vector<IntVector>& kernel) {
    if (kernel.empty()) return;
    for (int pass = 0; pass < 3; ++pass) {
        for (const auto& k : kernel) {
            Int kk = dot(k, k);
            if (kk == 0) continue;
            Int q = round_nearest(dot(x, k), kk);
            if (q == 0) continue;
            for (std::size_t i = 0; i < x.size(); ++i) x[i] -= q * k[i];
        }
    }
}

std::vector<IntVector> kernel_from_snf(const SmithDecomposition& snf, const Labels& col_labels,
                                       bool normalize_sign) {
    std::size_t r = snf_rank(snf.d);
    std::vector<IntVector> out;
    for (std::size_t j = r; j < snf.d.cols(); ++j) {
        IntVector k(col_labels);
        for (std::size_t i = 0; i < snf.v.rows(); ++i) k[i] = snf.v.at(i, j);
        if (normalize_sign) {
            for (std::size_t i = 0; i < k.size(); ++i) {
                if (k[i] == 0) continue;
                if (k[i] < 0)
                    for (std::size_t l = 0; l < k.size(); ++l) k[l] = -k[l];
                break;
            }
        }
        out.push_back(std::move(k));
    }
    return out;
}

}  // namespace

std::optional<IntVector> image_membership(const IntMatrix& a, const IntVector& d) {
    require(d.labels() == a.row_labels(), "right-hand side labels do not match matrix rows");
    SmithDecomposition snf = smith_normal_form(a);
    IntVector c = snf.u.apply(d);
    std::size_t r = snf_rank(snf.d);

    IntVector y(a.col_labels());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        if (i < r) {
            Int rem;
            mpz_tdiv_r(rem.get_mpz_t(), c[i].get_mpz_t(), snf.d.at(i, i).get_mpz_t());
            if (rem != 0) return std::nullopt;
            y[i] = c[i] / snf.d.at(i, i);
        } else if (c[i] != 0) {
            return std::nullopt;
        }
    }
    IntVector x = snf.v.apply(y);
    reduce_by_kernel(x, kernel_from_snf(snf, a.col_labels(), false));
    return x;
}

std::optional<IntVector> restricted_membership(const IntMatrix& a, const IntVector& d,
                                               const std::vector<std::string>& support) {
    IntMatrix sub = a.columns(support);
    auto solved = image_membership(sub, d);
    if (!solved) return std::nullopt;
    IntVector full(a.col_labels());
    for (std::size_t j = 0; j < support.size(); ++j) full.at(support[j]) = (*solved)[j];
    return full;
}

std::vector<IntVector> kernel_basis(const IntMatrix& a) {
    return kernel_from_snf(smith_normal_form(a), a.col_labels(), true);
}

Int determinant(const IntMatrix& a) {
    if (a.rows() != a.cols()) throw Error("determinant of a non-square matrix");
    const std::size_t n = a.rows();
    if (n == 0) return 1;

    // Bareiss fraction-free elimination; every division below is exact.
    IntMatrix w = a;
    int sign = 1;
    Int prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (w.at(k, k) == 0) {
            std::size_t swap_with = n;
            for (std::size_t i = k + 1; i < n; ++i)
                if (w.at(i, k) != 0) {
                    swap_with = i;
                    break;
                }
            if (swap_with == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(w.at(k, j), w.at(swap_with, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                Int num = w.at(i, j) * w.at(k, k) - w.at(i, k) * w.at(k, j);
                w.at(i, j) = num / prev;
            }
        prev = w.at(k, k);
    }
    return sign * w.at(n - 1, n - 1);
}

AbelianGroup cokernel(const IntMatrix& a) {
    SmithDecomposition snf = smith_normal_form(a);
    std::size_t r = snf_rank(snf.d);
    AbelianGroup g;
    g.free_rank = a.rows() - r;
    for (std::size_t i = 0; i < r; ++i)
        if (snf.d.at(i, i) > 1) g.torsion.push_back(snf.d.at(i, i));
    return g;
}

}  // namespace sinkx
