/* Public C API of the quenched-response library.
 *
 * The core is C++; this header is the stable ABI surface. Experiments are
 * opaque handles created from a JSON configuration string; every command
 * writes its reports into an output directory and returns a status code
 * matching the CLI exit-code contract.
 */
#ifndef QLR_H
#define QLR_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct qlr_experiment qlr_experiment;

typedef enum qlr_status {
  QLR_OK = 0,
  QLR_ERR_INTERNAL = 1, /* unexpected failure */
  QLR_ERR_CONFIG = 2,   /* invalid configuration */
  QLR_ERR_DYNAMICS = 3, /* non-mixing or non-expanding system */
  QLR_ERR_BUDGET = 4    /* aliasing/quadrature budget exceeded */
} qlr_status;

const char* qlr_version(void);

/* Creates an experiment from a JSON config document. Returns NULL on
 * failure, in which case errbuf (if non-NULL) receives the message. */
qlr_experiment* qlr_experiment_open(const char* config_json, char* errbuf,
                                    size_t errbuf_len);
qlr_experiment* qlr_experiment_open_file(const char* config_path,
                                         char* errbuf, size_t errbuf_len);
void qlr_experiment_close(qlr_experiment* exp);

/* Message of the last failed call on this handle ("" if none). The pointer
 * is owned by the handle and valid until the next call on it. */
const char* qlr_last_error(const qlr_experiment* exp);

qlr_status qlr_experiment_set_seed(qlr_experiment* exp, uint64_t seed);
qlr_status qlr_experiment_set_threads(qlr_experiment* exp, int threads);

/* Commands; out_dir is created if missing, files are written atomically. */
qlr_status qlr_run_density(qlr_experiment* exp, const char* out_dir);
qlr_status qlr_run_mixing(qlr_experiment* exp, const char* out_dir);
qlr_status qlr_run_verify_qr(qlr_experiment* exp, const char* out_dir);
qlr_status qlr_run_response(qlr_experiment* exp, const char* out_dir);
qlr_status qlr_run_sweep(qlr_experiment* exp, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* QLR_H */
