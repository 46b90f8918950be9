#include "trajlab/finite_difference.hpp"

#include "trajlab/errors.hpp"

namespace trajlab::fd {

Vector stencil_reach(const Vector& x) {
  Vector reach(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) reach[k] = 2.0 * step(x[k]);
  return reach;
}

SampleStencil sample_stencil(int index, int count) {
  if (count < 5) {
    throw Error(ErrorCode::kInsufficientSamples,
                "insufficient samples: need at least 5, have " + std::to_string(count));
  }
  if (index < 0 || index >= count) {
    throw Error(ErrorCode::kInvalidArgument, "sample index out of range");
  }
  SampleStencil st;
  if (index >= 2 && index <= count - 3) {
    st.first = index - 2;
    st.weight = {1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12};
  } else if (index == 0) {
    st.first = 0;
    st.weight = {-25.0 / 12, 48.0 / 12, -36.0 / 12, 16.0 / 12, -3.0 / 12};
    st.one_sided = true;
  } else if (index == 1) {
    st.first = 0;
    st.weight = {-3.0 / 12, -10.0 / 12, 18.0 / 12, -6.0 / 12, 1.0 / 12};
    st.one_sided = true;
  } else if (index == count - 2) {
    st.first = count - 5;
    st.weight = {-1.0 / 12, 6.0 / 12, -18.0 / 12, 10.0 / 12, 3.0 / 12};
    st.one_sided = true;
  } else {
    st.first = count - 5;
    st.weight = {3.0 / 12, -16.0 / 12, 36.0 / 12, -48.0 / 12, 25.0 / 12};
    st.one_sided = true;
  }
  return st;
}

std::vector<double> differentiate(std::span<const double> values, double spacing) {
  const int count = static_cast<int>(values.size());
  std::vector<double> out(values.size());
  for (int i = 0; i < count; ++i) {
    const SampleStencil st = sample_stencil(i, count);
    double acc = 0.0;
    for (int m = 0; m < 5; ++m) acc += st.weight[m] * values[st.first + m];
    out[i] = acc / spacing;
  }
  return out;
}

Vector differentiate_at(std::span<const Vector> values, int index, double spacing) {
  const SampleStencil st = sample_stencil(index, static_cast<int>(values.size()));
  Vector acc = Vector::Zero(values[index].size());
  for (int m = 0; m < 5; ++m) {
    if (st.weight[m] != 0.0) acc += st.weight[m] * values[st.first + m];
  }
  return acc / spacing;
}

}  // namespace trajlab::fd
