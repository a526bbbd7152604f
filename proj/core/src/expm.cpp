#include "hinv/expm.hpp"

#include <cmath>
#include <stdexcept>

#include "hinv/errors.hpp"

namespace hinv {

namespace {

constexpr double kTheta13 = 5.371920351148152;

constexpr double kPade13[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                              1187353796428800.0,  129060195264000.0,   10559470521600.0,
                              670442572800.0,      33522128640.0,       1323241920.0,
                              40840800.0,          960960.0,            16380.0,
                              182.0,               1.0};

}  // namespace

Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("matrix_exponential: matrix must be square");
  if (!a.allFinite()) throw NumericFailure("matrix_exponential: non-finite input");
  const Eigen::Index n = a.rows();
  if (n == 0) return a;

  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > kTheta13) squarings = static_cast<int>(std::ceil(std::log2(norm1 / kTheta13)));
  const Eigen::MatrixXd scaled = a * std::ldexp(1.0, -squarings);

  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd a2 = scaled * scaled;
  const Eigen::MatrixXd a4 = a2 * a2;
  const Eigen::MatrixXd a6 = a4 * a2;
  const auto& b = kPade13;

  Eigen::MatrixXd inner = b[13] * a6 + b[11] * a4 + b[9] * a2;
  Eigen::MatrixXd odd = a6 * inner;
  odd += b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id;
  const Eigen::MatrixXd u = scaled * odd;

  inner = b[12] * a6 + b[10] * a4 + b[8] * a2;
  Eigen::MatrixXd v = a6 * inner;
  v += b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;

  Eigen::MatrixXd result = (v - u).partialPivLu().solve(v + u);
  for (int s = 0; s < squarings; ++s) result = result * result;
  if (!result.allFinite()) throw NumericFailure("matrix_exponential: non-finite result");
  return result;
}

}  // namespace hinv
