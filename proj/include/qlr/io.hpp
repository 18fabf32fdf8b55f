#ifndef QLR_IO_HPP
#define QLR_IO_HPP

#include <string>

#include "qlr/spectral.hpp"
#include "qlr/transfer.hpp"

namespace qlr {

/// Shortest round-trippable decimal form, locale-independent.
std::string format_double(double x);

/// Writes via a temp file + rename so partial output is never observed.
void write_text_atomic(const std::string& path, const std::string& content);

/// Field dump: CSV with columns k_1[,k_2],re,im.
std::string field_to_csv(const SpectralField& f);

/// Grid-sample dump: CSV with columns x[,s],value (real part).
std::string field_samples_to_csv(const SpectralField& f, int grid_size);

/// Matrix dump: CSV (row,col,re,im), zero entries omitted below `drop_tol`.
std::string matrix_to_csv(const TransferMatrix& M, double drop_tol = 0.0);

}  // namespace qlr

#endif  // QLR_IO_HPP
