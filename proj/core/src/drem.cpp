#include "dremnet/drem.hpp"

#include <stdexcept>

namespace dremnet {

ExtendedRegressor extend(Matrix phi) {
  if (!phi.square()) throw std::invalid_argument("extend: extended regressor must be square");
  ExtendedRegressor ext;
  ext.det = determinant(phi);
  ext.adj = adjugate(phi);
  ext.phi = std::move(phi);
  return ext;
}

Matrix stack_regressors(std::span<const Vector> history) {
  const std::size_t d = history.size();
  if (d == 0) throw std::invalid_argument("stack_regressors: empty history");
  Matrix phi(d, d);
  for (std::size_t r = 0; r < d; ++r) {
    if (history[r].size() != d)
      throw std::invalid_argument("stack_regressors: need d regressors of length d");
    for (std::size_t c = 0; c < d; ++c) phi(r, c) = history[r][c];
  }
  return phi;
}

DremMessage mix(const ExtendedRegressor& ext, std::span<const double> y_stack, SensorIndex sensor,
                Step k) {
  if (y_stack.size() != ext.adj.cols())
    throw std::invalid_argument("mix: measurement window does not match regressor window");
  return {sensor, k, ext.det, ext.adj * y_stack};
}

MixedNoise mix_noise(const ExtendedRegressor& ext, std::span<const double> v_stack) {
  if (v_stack.size() != ext.adj.cols())
    throw std::invalid_argument("mix_noise: noise window does not match regressor window");
  return {ext.adj * v_stack};
}

DremMessage warmup_message(std::size_t d, SensorIndex sensor, Step k) {
  return {sensor, k, 0.0, Vector(d, 0.0)};
}

DremWindow::DremWindow(std::size_t dimension, SensorIndex sensor)
    : dimension_(dimension), sensor_(sensor) {
  if (dimension_ == 0) throw std::invalid_argument("DremWindow: dimension must be >= 1");
}

void DremWindow::push(Step k, Vector phi, double y, double noise) {
  if (phi.size() != dimension_) throw std::invalid_argument("DremWindow::push: regressor length");
  if (latest_ >= 0 && k != latest_ + 1)
    throw std::invalid_argument("DremWindow::push: samples must be consecutive in time");
  latest_ = k;
  samples_.push_front({std::move(phi), y, noise});
  if (samples_.size() > dimension_) samples_.pop_back();
}

ExtendedRegressor DremWindow::extended() const {
  if (!ready()) throw std::logic_error("DremWindow::extended: window incomplete");
  std::vector<Vector> history;
  history.reserve(dimension_);
  for (const auto& s : samples_) history.push_back(s.phi);
  return extend(stack_regressors(history));
}

std::pair<DremMessage, MixedNoise> DremWindow::transform() const {
  if (!ready())
    return {warmup_message(dimension_, sensor_, latest_), MixedNoise{Vector(dimension_, 0.0)}};
  const ExtendedRegressor ext = extended();
  Vector ys, vs;
  ys.reserve(dimension_);
  vs.reserve(dimension_);
  for (const auto& s : samples_) {
    ys.push_back(s.y);
    vs.push_back(s.v);
  }
  return {mix(ext, ys, sensor_, latest_), mix_noise(ext, vs)};
}

std::pair<DremMessage, MixedNoise> drem_transform(const DremWindow& window) {
  return window.transform();
}

}  // namespace dremnet
