/*
 * itolab C API: cadlag path operators, path CSV serialization, and the
 * config-driven experiment runner, behind opaque handles and integer
 * status codes. The shared library owns all memory it hands out; destroy
 * handles with the matching *_destroy call.
 *
 * Every function returning int yields ITOLAB_OK (0) on success or one of
 * the ITOLAB_ERR_* codes; itolab_last_error() returns a thread-local
 * message for the last failure on the calling thread.
 */
#ifndef ITOLAB_H
#define ITOLAB_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#define ITOLAB_OK 0
#define ITOLAB_ERR_INVALID 1   /* bad input, contract violation, bad config */
#define ITOLAB_ERR_NUMERIC 2   /* non-finite value surfaced */
#define ITOLAB_ERR_BUDGET 3    /* configured budget cap exceeded */
#define ITOLAB_ERR_IO 4        /* filesystem failure */
#define ITOLAB_ERR_INTERNAL 5

typedef struct itolab_grid itolab_grid;
typedef struct itolab_path itolab_path;

const char* itolab_version(void);
const char* itolab_last_error(void);

/* ---- time grid --------------------------------------------------------- */

int itolab_grid_create(double horizon, size_t node_count, itolab_grid** out);
void itolab_grid_destroy(itolab_grid* grid);
size_t itolab_grid_node_count(const itolab_grid* grid);
double itolab_grid_dt(const itolab_grid* grid);
/* Nearest node to t. */
int itolab_grid_snap(const itolab_grid* grid, double t, size_t* node_out);

/* ---- cadlag paths ------------------------------------------------------ */

/* values: node_count * dim doubles, row-major per node; NULL for the zero
 * path. */
int itolab_path_create(const itolab_grid* grid, size_t dim, const double* values,
                       itolab_path** out);
/* jump: dim doubles; all-zero clears the entry. Node 0 cannot jump. */
int itolab_path_set_jump(itolab_path* path, size_t node, const double* jump);
void itolab_path_destroy(itolab_path* path);

size_t itolab_path_dim(const itolab_path* path);
size_t itolab_path_nodes(const itolab_path* path);
/* Copies node values (resp. jump sizes) into buffer (len >= nodes*dim). */
int itolab_path_values(const itolab_path* path, double* buffer, size_t buffer_len);
int itolab_path_jumps(const itolab_path* path, double* buffer, size_t buffer_len);

/* The Dupire/Skorokhod operators. Times are node indices; use
 * itolab_grid_snap to round a continuous time. */
int itolab_path_stop(const itolab_path* path, size_t node, itolab_path** out);
int itolab_path_predictable_stop(const itolab_path* path, size_t node, itolab_path** out);
int itolab_path_bump(const itolab_path* path, size_t node, const double* shift,
                     itolab_path** out);
int itolab_path_replace(const itolab_path* path, size_t node, const double* value,
                        itolab_path** out);
int itolab_path_dtheta(const itolab_path* a, size_t node_a, const itolab_path* b,
                       size_t node_b, double* out);
int itolab_path_sup_norm(const itolab_path* path, double* out);

/* CSV round trip: header t,x_1..x_d,jump_1..jump_d, 17 significant
 * digits, bit-exact for binary64. */
int itolab_path_write_csv(const itolab_path* path, const char* filename);
int itolab_path_read_csv(const char* filename, itolab_path** out);

/* ---- experiments ------------------------------------------------------- */

/* Runs the experiment described by the config file. out_dir overrides the
 * config when non-NULL; seed_override applies when >= 0; threads applies
 * when > 0. Identical effective configs produce byte-identical outputs. */
int itolab_run_experiment(const char* config_file, const char* out_dir,
                          long long seed_override, int threads);
int itolab_validate_config(const char* config_file);
/* Newline-separated catalog of experiment kinds, functionals, and laws.
 * Truncates to buffer_len - 1 characters. */
int itolab_catalog(char* buffer, size_t buffer_len);

#ifdef __cplusplus
}
#endif

#endif /* ITOLAB_H */
