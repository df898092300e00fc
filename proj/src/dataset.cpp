#include "glmmc/dataset.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "glmmc/errors.hpp"

namespace glmmc {

Dataset load_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw IoError("empty dataset file: " + path);

  // header: y,x1,...,xd
  int cols = 1;
  for (char c : line)
    if (c == ',') ++cols;
  if (cols < 2 || line.substr(0, 1) != "y")
    throw IoError("dataset header must be y,x1,...,xd: " + path);
  const int d = cols - 1;

  std::vector<double> ys;
  std::vector<double> xs;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    int c = 0;
    while (std::getline(ss, cell, ',')) {
      const double v = std::stod(cell);
      if (c == 0)
        ys.push_back(v);
      else
        xs.push_back(v);
      ++c;
    }
    if (c != cols)
      throw IoError("row " + std::to_string(row) + " has " + std::to_string(c) +
                    " columns, expected " + std::to_string(cols));
  }

  const int n = static_cast<int>(ys.size());
  Dataset ds;
  ds.y = Eigen::Map<Eigen::VectorXd>(ys.data(), n);
  ds.x = Eigen::Map<
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      xs.data(), n, d);
  return ds;
}

void save_dataset_csv(const std::string& path, const Eigen::MatrixXd& x,
                      const Eigen::VectorXd& y) {
  if (x.rows() != y.size()) throw IoError("X rows must match Y length");
  std::ofstream out(path);
  if (!out) throw IoError("cannot write dataset file: " + path);
  out << "y";
  for (Eigen::Index j = 0; j < x.cols(); ++j) out << ",x" << (j + 1);
  out << "\n";
  char buf[32];
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", y[i]);
    out << buf;
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", x(i, j));
      out << ',' << buf;
    }
    out << "\n";
  }
}

}  // namespace glmmc
