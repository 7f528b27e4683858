#pragma once

// Internal fit entry points for the individual learners. Kept out of
// models.hpp so callers only see the uniform fit/score surface.

#include <memory>
#include <span>

#include "leaklab/models.hpp"

namespace leaklab::models::detail {

std::shared_ptr<const Model> fit_logreg(const ModelSpec&, const Matrix&, std::span<const int>);
std::shared_ptr<const Model> fit_gnb(const ModelSpec&, const Matrix&, std::span<const int>);
std::shared_ptr<const Model> fit_tree(const ModelSpec&, const Matrix&, std::span<const int>);
std::shared_ptr<const Model> fit_forest(const ModelSpec&, const Matrix&, std::span<const int>);
std::shared_ptr<const Model> fit_knn(const ModelSpec&, const Matrix&, std::span<const int>);

} // namespace leaklab::models::detail
