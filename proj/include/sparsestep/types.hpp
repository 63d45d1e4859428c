#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace sparsestep {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Coefficient vector beta (length m). Also used for supporting points.
using CoefficientVector = Eigen::VectorXd;

/// Design matrix and response for one regression problem.
struct Dataset
{
    Matrix X;
    Vector y;

    Eigen::Index rows() const { return X.rows(); }
    Eigen::Index cols() const { return X.cols(); }
};

/// Base class for all library errors.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Bad argument, invalid parameter pack or mismatched dimensions.
class InvalidArgument : public Error
{
public:
    using Error::Error;
};

/// Malformed or unusable data (constant columns, missing files, zero signal).
class DataError : public Error
{
public:
    using Error::Error;
};

/// Factorization failure, non-convergence and other numeric breakdowns.
class NumericError : public Error
{
public:
    using Error::Error;
};

inline void require(bool cond, const std::string& msg)
{
    if (!cond) throw InvalidArgument(msg);
}

} // namespace sparsestep
