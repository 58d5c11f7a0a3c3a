/* Compiled as C to keep the public header C-clean. */
#include "marswpt/marswpt.h"

int mwpt_c_smoke(void) {
  mwpt_config* cfg = NULL;
  mwpt_budget b;
  int ok;
  if (mwpt_config_create(&cfg) != MWPT_OK) return 0;
  ok = mwpt_link_budget(cfg, &b) == MWPT_OK && b.p_rx_dbm < 0.0;
  mwpt_config_destroy(cfg);
  return ok;
}
