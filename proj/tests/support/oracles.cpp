#include "oracles.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace ddoco::oracle {

Matrix hankel_by_loops(const Matrix& signal, Index depth) {
    const Index q = signal.rows();
    const Index cols = signal.cols() - depth + 1;
    Matrix h(q * depth, cols);
    for (Index i = 0; i < depth; ++i) {
        for (Index j = 0; j < cols; ++j) {
            for (Index r = 0; r < q; ++r) h(i * q + r, j) = signal(r, i + j);
        }
    }
    return h;
}

Index jacobi_rank(const Matrix& a) {
    if (a.size() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(a);
    const Vector& s = svd.singularValues();
    const double cut = static_cast<double>(std::max(a.rows(), a.cols())) * s(0) * 1e-12;
    Index r = 0;
    for (Index i = 0; i < s.size(); ++i) r += s(i) > cut ? 1 : 0;
    return r;
}

Trajectory simulate(const PlantModel& model, const Vector& x0, const Matrix& inputs) {
    Matrix y(model.outputs(), inputs.cols());
    Vector x = x0;
    for (Index k = 0; k < inputs.cols(); ++k) {
        y.col(k) = model.C * x + model.D * inputs.col(k);
        x = model.A * x + model.B * inputs.col(k);
    }
    return Trajectory(inputs, y);
}

Vector min_weighted_norm(const Matrix& Q, const Matrix& H, const Vector& g) {
    Eigen::FullPivLU<Matrix> lu(H);
    lu.setThreshold(1e-10);
    const Matrix kernel = lu.kernel();
    const Vector particular = H.colPivHouseholderQr().solve(g);
    if (lu.dimensionOfKernel() == 0) return particular;
    const Matrix qk = Q * kernel;
    const Vector w = qk.completeOrthogonalDecomposition().solve(-(Q * particular));
    return particular + kernel * w;
}

Vector perturb_in_kernel(const Matrix& H, const Vector& beta, std::mt19937_64& rng, double scale) {
    Eigen::FullPivLU<Matrix> lu(H);
    lu.setThreshold(1e-10);
    if (lu.dimensionOfKernel() == 0) return beta;
    const Matrix kernel = lu.kernel();
    std::normal_distribution<double> normal(0.0, scale);
    Vector w(kernel.cols());
    for (Index i = 0; i < w.size(); ++i) w(i) = normal(rng);
    return beta + kernel * w;
}

Vector model_steady_output(const PlantModel& model, const Vector& u) {
    const Index n = model.states();
    const Vector x = (Matrix::Identity(n, n) - model.A).fullPivLu().solve(model.B * u);
    return model.C * x + model.D * u;
}

Vector constrained_ls(const Matrix& A, const Vector& b, double lambda, const Matrix& E, const Vector& f) {
    const Index n = A.cols();
    const Index k = E.rows();
    Matrix kkt = Matrix::Zero(n + k, n + k);
    kkt.topLeftCorner(n, n) = 2.0 * (A.transpose() * A + lambda * Matrix::Identity(n, n));
    kkt.topRightCorner(n, k) = E.transpose();
    kkt.bottomLeftCorner(k, n) = E;
    Vector rhs(n + k);
    rhs << 2.0 * A.transpose() * b, f;
    return kkt.completeOrthogonalDecomposition().solve(rhs).head(n);
}

Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& z, double h) {
    Vector g(z.size());
    for (Index i = 0; i < z.size(); ++i) {
        Vector zp = z, zm = z;
        zp(i) += h;
        zm(i) -= h;
        g(i) = (f(zp) - f(zm)) / (2.0 * h);
    }
    return g;
}

Matrix random_spd(Index dim, double lo, double hi, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uni(lo, hi);
    Matrix g(dim, dim);
    for (Index i = 0; i < g.size(); ++i) g(i) = normal(rng);
    const Matrix q = g.householderQr().householderQ();
    Vector eig(dim);
    for (Index i = 0; i < dim; ++i) eig(i) = uni(rng);
    eig(0) = lo;
    if (dim > 1) eig(dim - 1) = hi;
    const Matrix h = q * eig.asDiagonal() * q.transpose();
    return 0.5 * (h + h.transpose());
}

Vector random_vector(Index dim, double lo, double hi, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(lo, hi);
    Vector v(dim);
    for (Index i = 0; i < dim; ++i) v(i) = uni(rng);
    return v;
}

Vector constrained_quadratic_min(const Matrix& H, const Vector& r, const Matrix& span) {
    const Matrix q = span.householderQr().householderQ() * Matrix::Identity(span.rows(), span.cols());
    const Matrix reduced = q.transpose() * H * q;
    const Vector w = reduced.llt().solve(q.transpose() * H * r);
    return q * w;
}

double fitted_rate(const std::vector<double>& values, std::size_t first, std::size_t last) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0, c = 0;
    for (std::size_t t = first; t < last; ++t) {
        const double x = static_cast<double>(t);
        const double y = std::log(values[t]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        c += 1;
    }
    return std::exp((c * sxy - sx * sy) / (c * sxx - sx * sx));
}

}  // namespace ddoco::oracle
