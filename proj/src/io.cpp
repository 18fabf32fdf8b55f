#include "qlr/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace qlr {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  // Shortest representation that round-trips.
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
    double back;
    std::sscanf(buf, "%lf", &back);
    if (back == x) return buf;
  }
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream ofs(tmp, std::ios::binary | std::ios::trunc);
    if (!ofs) throw Error("cannot open for writing: " + tmp);
    ofs << content;
    if (!ofs) throw Error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::string field_to_csv(const SpectralField& f) {
  std::string out;
  const int K = f.bandwidth();
  if (f.dim() == 1) {
    out = "k,re,im\n";
    for (int k = -K; k <= K; ++k) {
      const Complex c = f.coeff(k);
      out += std::to_string(k) + "," + format_double(c.real()) + "," +
             format_double(c.imag()) + "\n";
    }
  } else {
    out = "k1,k2,re,im\n";
    for (int k1 = -K; k1 <= K; ++k1)
      for (int k2 = -K; k2 <= K; ++k2) {
        const Complex c = f.coeff(k1, k2);
        out += std::to_string(k1) + "," + std::to_string(k2) + "," +
               format_double(c.real()) + "," + format_double(c.imag()) + "\n";
      }
  }
  return out;
}

std::string field_samples_to_csv(const SpectralField& f, int G) {
  const VectorXcd samples = synthesize(f, G);
  std::string out;
  if (f.dim() == 1) {
    out = "x,value\n";
    for (int g = 0; g < G; ++g)
      out += format_double(double(g) / G) + "," +
             format_double(samples[g].real()) + "\n";
  } else {
    out = "x,s,value\n";
    for (int gx = 0; gx < G; ++gx)
      for (int gs = 0; gs < G; ++gs)
        out += format_double(double(gx) / G) + "," +
               format_double(double(gs) / G) + "," +
               format_double(samples[gs + G * gx].real()) + "\n";
  }
  return out;
}

std::string matrix_to_csv(const TransferMatrix& M, double drop_tol) {
  std::string out = "row,col,re,im\n";
  for (Eigen::Index r = 0; r < M.M.rows(); ++r)
    for (Eigen::Index c = 0; c < M.M.cols(); ++c) {
      const Complex v = M.M(r, c);
      if (std::abs(v) <= drop_tol && drop_tol > 0) continue;
      out += std::to_string(r) + "," + std::to_string(c) + "," +
             format_double(v.real()) + "," + format_double(v.imag()) + "\n";
    }
  return out;
}

}  // namespace qlr
