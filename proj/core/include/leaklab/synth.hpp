#pragma once

#include "leaklab/dataset.hpp"

namespace leaklab::corpus {

// Gaussian class-conditional generator. Every axis is informative: class
// means sit at +/- class_sep/2, unit variance. The first n_categorical
// columns are discretized into 4 levels by empirical quartile binning of the
// latent Gaussian, which keeps a label association for encoding experiments.
// Pure function of the spec: same spec, same bits.
Dataset gen_synthetic(const SyntheticSpec& spec);

// Temporal variant: time_index = 0..n-1 and the class-separation direction
// rotates in the plane of the first two feature axes at `drift` radians per
// unit time. Early rows and late rows are equally separable, but a model fit
// on the past extrapolates poorly to the future. Requires drift > 0, p >= 2.
Dataset gen_temporal_drift(const SyntheticSpec& spec);

// Grouped variant: labels are assigned per group, all rows of a group share a
// latent feature offset of scale group_offset. With offset > 0 a row's
// group-mates give away its label to any neighbour-sensitive model, which is
// exactly what group-aware folding has to guard against.
Dataset gen_grouped(const SyntheticSpec& spec);

} // namespace leaklab::corpus
