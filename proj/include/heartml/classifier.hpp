#pragma once

#include <span>
#include <string>
#include <vector>

#include "heartml/matrix.hpp"

namespace heartml {

enum class ModelFamily { LogReg, Knn, Forest };

std::string family_name(ModelFamily family);
ModelFamily family_from_name(const std::string& name);

/// Contract shared by the three model families. predict_proba is the
/// score of class 1; predict derives the hard label from it under each
/// family's documented tie rules.
class Classifier {
public:
    virtual ~Classifier() = default;

    virtual void fit(const Matrix& x, const std::vector<int>& y) = 0;
    virtual int predict(std::span<const double> row) const = 0;
    virtual double predict_proba(std::span<const double> row) const = 0;
};

/// Fraction of rows where predict(x) equals y.
double score_accuracy(const Classifier& model, const Matrix& x, const std::vector<int>& y);

}  // namespace heartml
