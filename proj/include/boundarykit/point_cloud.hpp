#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "boundarykit/errors.hpp"

namespace boundarykit {

// Sample of n points in R^D believed to live on a d-dimensional set.
// Rows of `pts` are points.  The ambient cap keeps the dense linear algebra
// in the pipeline at fixed small sizes.
class PointCloud {
  public:
    static constexpr int kMaxAmbientDim = 16;

    PointCloud(Eigen::MatrixXd points, int intrinsic_dim);

    int size() const { return static_cast<int>(pts_.rows()); }
    int ambient_dim() const { return static_cast<int>(pts_.cols()); }
    int intrinsic_dim() const { return d_; }

    Eigen::VectorXd point(int i) const { return pts_.row(i).transpose(); }
    const Eigen::MatrixXd& points() const { return pts_; }

  private:
    Eigen::MatrixXd pts_;
    int d_;
};

// CSV layout: header x0,...,x{D-1}, one point per row, shortest decimal form
// that round-trips the IEEE-754 value.
PointCloud load_cloud_csv(const std::string& path, int intrinsic_dim);
void save_cloud_csv(const PointCloud& cloud, const std::string& path);

// shortest round-trip decimal form of one double (shared by all CSV writers)
std::string format_double(double v);

}  // namespace boundarykit
