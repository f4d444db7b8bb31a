#pragma once

#include <Eigen/Dense>

namespace pipdim {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

}  // namespace pipdim
