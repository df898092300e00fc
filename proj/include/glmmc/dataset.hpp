#pragma once

// CSV dataset format: header row `y,x1,...,xd`, one observation per row.

#include <Eigen/Dense>
#include <string>

namespace glmmc {

struct Dataset {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
};

Dataset load_dataset_csv(const std::string& path);
void save_dataset_csv(const std::string& path, const Eigen::MatrixXd& x,
                      const Eigen::VectorXd& y);

}  // namespace glmmc
