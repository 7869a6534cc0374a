#include <math.h>
#include <stdio.h>
#include <string.h>

#include "bdscore.h"

#define CHECK(cond)                                                   \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "line %d: %s (%s)\n", __LINE__, #cond,          \
              bd_last_error_message());                               \
      return 1;                                                       \
    }                                                                 \
  } while (0)

int main(void) {
  const char *csv = "A:2,B:2\n0,0\n1,1\n1,1\n0,1\n";
  BdDataset *ds = NULL;
  CHECK(bd_dataset_load_bytes((const uint8_t *)csv, strlen(csv), &ds) == BD_STATUS_OK);

  size_t n = 0;
  CHECK(bd_dataset_num_rows(ds, &n) == BD_STATUS_OK && n == 4);

  BdPrior jeffreys = {BD_PRIOR_KIND_JEFFREYS, 0.0, 0.0};
  size_t vars[2] = {0, 1};
  double q = 0.0;
  CHECK(bd_marginal_score(ds, vars, 2, &jeffreys, &q) == BD_STATUS_OK);
  CHECK(q < 0.0);

  size_t idx = 0;
  CHECK(bd_dataset_index_of(ds, "Nope", &idx) == BD_STATUS_UNKNOWN_VARIABLE);
  CHECK(strlen(bd_last_error_message()) > 0);

  BdNetwork *net = NULL;
  CHECK(bd_learn_exact(ds, &jeffreys, 1, &net, NULL) == BD_STATUS_OK);
  bd_network_free(net);
  bd_dataset_free(ds);

  double lg = 0.0;
  CHECK(bd_log_gamma(5.0, &lg) == BD_STATUS_OK && fabs(lg - log(24.0)) < 1e-12);
  CHECK(bd_log_gamma(-1.0, &lg) == BD_STATUS_DOMAIN);
  puts("ok");
  return 0;
}
