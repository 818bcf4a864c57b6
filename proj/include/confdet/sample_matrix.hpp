#pragma once

#include <string>
#include <vector>

namespace confdet {

enum class ColumnKind { Binary, Categorical, Continuous };

const char* to_string(ColumnKind k);

struct Column {
    std::string name;
    ColumnKind kind = ColumnKind::Continuous;
    int levels = 0;  // 2 for binary, level count for categorical, 0 for continuous
    std::vector<double> values;
};

/// Named columns of equal length. Missing entries (NaN) are rejected at
/// ingestion; categorical values must be integer codes within the declared
/// level range.
class SampleMatrix {
public:
    void add_binary(const std::string& name, std::vector<double> values);
    void add_categorical(const std::string& name, std::vector<double> values, int levels);
    void add_continuous(const std::string& name, std::vector<double> values);

    int n_rows() const { return n_rows_; }
    int n_cols() const { return static_cast<int>(columns_.size()); }
    bool has(const std::string& name) const;
    const Column& column(const std::string& name) const;
    const std::vector<Column>& columns() const { return columns_; }

private:
    void add(Column col);
    std::vector<Column> columns_;
    int n_rows_ = -1;  // unset until the first column arrives
};

}  // namespace confdet
