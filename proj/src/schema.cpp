#include "heartml/schema.hpp"

#include <cstdio>

namespace heartml {

std::vector<std::string> FeatureSchema::predictor_names() const {
    std::vector<std::string> names;
    names.reserve(predictor_count());
    for (std::size_t i = 0; i + 1 < columns.size(); ++i) {
        names.push_back(columns[i].name);
    }
    return names;
}

std::uint64_t FeatureSchema::fingerprint() const {
    // FNV-1a 64-bit over "age,sex,...,target"
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    auto mix = [&hash](char c) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 0x100000001b3ULL;
    };
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i > 0) mix(',');
        for (char c : columns[i].name) mix(c);
    }
    return hash;
}

std::string FeatureSchema::fingerprint_hex() const {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fingerprint()));
    return buf;
}

FeatureSchema FeatureSchema::heart() {
    auto real = [](const char* name) {
        return ColumnSpec{name, ValueKind::Real, 0, 0};
    };
    auto coded = [](const char* name, int lo, int hi) {
        return ColumnSpec{name, ValueKind::Coded, lo, hi};
    };
    FeatureSchema schema;
    schema.columns = {
        real("age"),
        coded("sex", 0, 1),
        coded("cp", 0, 3),
        real("trestbps"),
        real("chol"),
        coded("fbs", 0, 1),
        coded("restecg", 0, 2),
        real("thalach"),
        coded("exang", 0, 1),
        real("oldpeak"),
        coded("slope", 0, 2),
        coded("ca", 0, 4),
        real("thal"),
        coded("target", 0, 1),
    };
    return schema;
}

}  // namespace heartml
