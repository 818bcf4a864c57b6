#include "confdet/sample_matrix.hpp"

#include <cmath>

#include "confdet/errors.hpp"

namespace confdet {

const char* to_string(ColumnKind k) {
    switch (k) {
        case ColumnKind::Binary: return "binary";
        case ColumnKind::Categorical: return "categorical";
        default: return "continuous";
    }
}

void SampleMatrix::add(Column col) {
    if (n_rows_ < 0)
        n_rows_ = static_cast<int>(col.values.size());
    else if (static_cast<int>(col.values.size()) != n_rows_)
        throw DataError("column '" + col.name + "' has " + std::to_string(col.values.size()) +
                        " rows, expected " + std::to_string(n_rows_));
    if (has(col.name)) throw UsageError("duplicate column name: " + col.name);
    for (std::size_t i = 0; i < col.values.size(); ++i) {
        const double v = col.values[i];
        if (std::isnan(v))
            throw DataError("missing entry in column '" + col.name + "' at row " +
                            std::to_string(i + 1));
        if (col.kind != ColumnKind::Continuous) {
            if (v != std::floor(v) || v < 0 || v >= static_cast<double>(col.levels))
                throw DataError("column '" + col.name + "' has value " + std::to_string(v) +
                                " outside its declared " + std::to_string(col.levels) +
                                " levels at row " + std::to_string(i + 1));
        }
    }
    columns_.push_back(std::move(col));
}

void SampleMatrix::add_binary(const std::string& name, std::vector<double> values) {
    add(Column{name, ColumnKind::Binary, 2, std::move(values)});
}

void SampleMatrix::add_categorical(const std::string& name, std::vector<double> values,
                                   int levels) {
    if (levels < 2) throw UsageError("categorical column '" + name + "' needs >= 2 levels");
    add(Column{name, ColumnKind::Categorical, levels, std::move(values)});
}

void SampleMatrix::add_continuous(const std::string& name, std::vector<double> values) {
    add(Column{name, ColumnKind::Continuous, 0, std::move(values)});
}

bool SampleMatrix::has(const std::string& name) const {
    for (const auto& c : columns_)
        if (c.name == name) return true;
    return false;
}

const Column& SampleMatrix::column(const std::string& name) const {
    for (const auto& c : columns_)
        if (c.name == name) return c;
    throw UsageError("unknown column: " + name);
}

}  // namespace confdet
