#pragma once

#include <Eigen/Dense>

#include <sstream>
#include <string>

namespace levysde {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Squared Euclidean norm: sum of squared components.
inline double squared_norm(const Vector& v) { return v.squaredNorm(); }

/// Squared Frobenius norm: sum over all entries of sigma^i_j squared.
inline double squared_frobenius(const Matrix& m) { return m.squaredNorm(); }

inline std::string to_string(const Vector& v) {
    std::ostringstream os;
    os.precision(17);
    os << '(';
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) os << ", ";
        os << v[i];
    }
    os << ')';
    return os.str();
}

}  // namespace levysde
