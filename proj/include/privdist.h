/*
 * privdist - privacy-preserving Haversine distance over ElGamal.
 *
 * C interface to the protocol library. Two parties (P1, P2) and a control
 * center (C) jointly compute the great-circle distance between two GPS
 * coordinates; the coordinates never leave their owners in the clear.
 *
 * The API is handle-based: every object is an opaque pointer created by a
 * privdist_*_new/load function and released with the matching *_free.
 * Functions return PRIVDIST_OK (0) on success. Party handles are sans-IO
 * state machines: deliver inbound frames with privdist_party_deliver and
 * drain outbound frames from the outbox; the caller owns all sockets.
 */
#ifndef PRIVDIST_H
#define PRIVDIST_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PRIVDIST_API __declspec(dllexport)
#else
#define PRIVDIST_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum privdist_status {
  PRIVDIST_OK = 0,
  PRIVDIST_ERR_INVALID_ARGUMENT = 1,
  PRIVDIST_ERR_UNKNOWN_GROUP = 2,
  PRIVDIST_ERR_BITS_TOO_SMALL = 3,
  PRIVDIST_ERR_RANGE = 4,
  PRIVDIST_ERR_MALFORMED_CIPHERTEXT = 5,
  PRIVDIST_ERR_CODEC = 6,
  PRIVDIST_ERR_KEY_INTEGRITY = 7,
  PRIVDIST_ERR_PARSE = 8,
  PRIVDIST_ERR_UNKNOWN_TYPE = 9,
  PRIVDIST_ERR_OVERSIZE = 10,
  PRIVDIST_ERR_REJECT_TAMPERED = 11,
  PRIVDIST_ERR_REJECT_SIZE = 12,
  PRIVDIST_ERR_BAD_SIGNATURE_P1 = 13,
  PRIVDIST_ERR_BAD_SIGNATURE_P2 = 14,
  PRIVDIST_ERR_DIGEST_MISMATCH = 15,
  PRIVDIST_ERR_CORRUPTED_RUN = 16,
  PRIVDIST_ERR_PROTOCOL_STATE = 17,
  PRIVDIST_ERR_IO = 18,
  PRIVDIST_ERR_BUFFER_TOO_SMALL = 19,
  PRIVDIST_ERR_INTERNAL = 20
} privdist_status;

typedef struct privdist_group privdist_group;
typedef struct privdist_rng privdist_rng;
typedef struct privdist_enc_key privdist_enc_key;
typedef struct privdist_sig_key privdist_sig_key;
typedef struct privdist_config privdist_config;
typedef struct privdist_party privdist_party;

PRIVDIST_API const char* privdist_version(void);
PRIVDIST_API const char* privdist_status_str(privdist_status st);

/* ---- groups -------------------------------------------------------- */

/* Built-in names: "test-23", "modp-1536", "modp-2048", "modp-3072". */
PRIVDIST_API privdist_status privdist_group_load(const char* name,
                                                 privdist_group** out);
/* Fresh safe-prime group of exactly `bits` bits (minimum 8; 2048+ is slow). */
PRIVDIST_API privdist_status privdist_group_generate(unsigned bits,
                                                     privdist_rng* rng,
                                                     privdist_group** out);
PRIVDIST_API void privdist_group_free(privdist_group* g);
PRIVDIST_API unsigned privdist_group_bits(const privdist_group* g);

/* ---- randomness ----------------------------------------------------- */

PRIVDIST_API privdist_status privdist_rng_new(privdist_rng** out);
PRIVDIST_API privdist_status privdist_rng_new_seeded(uint64_t seed,
                                                     privdist_rng** out);
PRIVDIST_API void privdist_rng_free(privdist_rng* r);

/* ---- keys ------------------------------------------------------------ */

PRIVDIST_API privdist_status privdist_enc_keygen(const privdist_group* g,
                                                 privdist_rng* rng,
                                                 privdist_enc_key** out);
PRIVDIST_API privdist_status privdist_sig_keygen(const privdist_group* g,
                                                 privdist_rng* rng,
                                                 privdist_sig_key** out);

/*
 * Key text is a self-contained PEM-like block. Export with include_secret=0
 * gives the public half only. The returned string must be released with
 * privdist_text_free. Import verifies the embedded checksum and, for secret
 * keys, that the secret reproduces the public half; `group` may be NULL, in
 * which case the embedded group parameters are revalidated from scratch.
 */
PRIVDIST_API privdist_status privdist_enc_key_export(const privdist_enc_key* k,
                                                     int include_secret,
                                                     char** text_out);
PRIVDIST_API privdist_status privdist_sig_key_export(const privdist_sig_key* k,
                                                     int include_secret,
                                                     char** text_out);
PRIVDIST_API privdist_status privdist_enc_key_import(const char* text,
                                                     const privdist_group* group,
                                                     privdist_enc_key** out);
PRIVDIST_API privdist_status privdist_sig_key_import(const char* text,
                                                     const privdist_group* group,
                                                     privdist_sig_key** out);
PRIVDIST_API int privdist_enc_key_has_secret(const privdist_enc_key* k);
PRIVDIST_API int privdist_sig_key_has_secret(const privdist_sig_key* k);
PRIVDIST_API void privdist_enc_key_free(privdist_enc_key* k);
PRIVDIST_API void privdist_sig_key_free(privdist_sig_key* k);
PRIVDIST_API void privdist_text_free(char* text);

/* ---- session configuration ------------------------------------------ */

/*
 * All three parties must be constructed from identical configuration:
 * the group, C's encryption public key, both signature public keys, the
 * fixed-point scale F (even, 4*F^5 < p), the ciphertext count N (>= 4),
 * the sphere radius and an opaque session id.
 */
PRIVDIST_API privdist_status privdist_config_new(
    const privdist_group* group, const privdist_enc_key* c_public,
    const privdist_sig_key* p1_public, const privdist_sig_key* p2_public,
    uint64_t scale, uint32_t n_ciphertexts, double radius_km,
    const uint8_t* session_id, size_t session_id_len, privdist_config** out);
PRIVDIST_API void privdist_config_free(privdist_config* c);

/* ---- party state machines ------------------------------------------- */

/*
 * Coordinates are decimal degrees. The rng handle is consumed (owned by the
 * party) and must not be freed or reused by the caller afterwards.
 */
PRIVDIST_API privdist_status privdist_party_new_p1(const privdist_config* cfg,
                                                   double lat_deg, double lon_deg,
                                                   const privdist_sig_key* own_secret,
                                                   privdist_rng* rng,
                                                   privdist_party** out);
PRIVDIST_API privdist_status privdist_party_new_p2(const privdist_config* cfg,
                                                   double lat_deg, double lon_deg,
                                                   const privdist_sig_key* own_secret,
                                                   privdist_rng* rng,
                                                   privdist_party** out);
PRIVDIST_API privdist_status privdist_party_new_c(const privdist_config* cfg,
                                                  const privdist_enc_key* c_secret,
                                                  privdist_party** out);
PRIVDIST_API void privdist_party_free(privdist_party* p);

/* P2 queues its opening message here; a no-op for P1 and C. */
PRIVDIST_API privdist_status privdist_party_start(privdist_party* p);

/* Feed one complete frame (4-byte length prefix included) to the party. */
PRIVDIST_API privdist_status privdist_party_deliver(privdist_party* p,
                                                    const uint8_t* frame,
                                                    size_t frame_len);

/* Outbox destinations, OR-able: a broadcast frame carries several bits but
 * still counts as one protocol transmission. */
#define PRIVDIST_DEST_P1 1u
#define PRIVDIST_DEST_P2 2u
#define PRIVDIST_DEST_C 4u

PRIVDIST_API size_t privdist_party_outbox_size(const privdist_party* p);
/* Peek the front frame's byte length (0 if the outbox is empty). */
PRIVDIST_API size_t privdist_party_outbox_front_len(const privdist_party* p);
/* Pop the front frame into `buf`; fails with BUFFER_TOO_SMALL (and leaves the
 * frame queued) when buf_len is insufficient. */
PRIVDIST_API privdist_status privdist_party_outbox_pop(privdist_party* p,
                                                       uint8_t* buf, size_t buf_len,
                                                       size_t* frame_len_out,
                                                       uint8_t* dest_mask_out);

PRIVDIST_API int privdist_party_finished(const privdist_party* p);
PRIVDIST_API privdist_status privdist_party_distance_km(const privdist_party* p,
                                                        double* km_out);

/* Total modular exponentiations performed by this party so far. */
PRIVDIST_API uint64_t privdist_party_exp_count(const privdist_party* p);

typedef enum privdist_cost {
  PRIVDIST_COST_CIPHERTEXTS = 0, /* the four trig encryptions (8 exps)      */
  PRIVDIST_COST_MASKS = 1,       /* mask (re-)encryption, 2*(N-3) exps      */
  PRIVDIST_COST_SIGNATURE = 2,   /* one ElGamal signature                   */
  PRIVDIST_COST_DECRYPT = 3,     /* C only: N decryptions                   */
  PRIVDIST_COST_VERIFY = 4       /* C only: both signature verifications    */
} privdist_cost;
PRIVDIST_API uint64_t privdist_party_cost(const privdist_party* p,
                                          privdist_cost which);

/* Human-readable detail for the most recent failure on this handle. */
PRIVDIST_API const char* privdist_party_last_error(const privdist_party* p);
/* One-line session summary; meaningful for the C role after completion. */
PRIVDIST_API privdist_status privdist_party_audit(const privdist_party* p,
                                                  char** text_out);

/* ---- plaintext reference and microbench ------------------------------ */

/* Plain Haversine distance, decimal degrees in, kilometers out. */
PRIVDIST_API privdist_status privdist_haversine_km(double lat1_deg, double lon1_deg,
                                                   double lat2_deg, double lon2_deg,
                                                   double radius_km, double* km_out);

/* Mean wall-clock milliseconds of one modular exponentiation in the group. */
PRIVDIST_API privdist_status privdist_bench_exp_ms(const privdist_group* g,
                                                   privdist_rng* rng, unsigned reps,
                                                   double* ms_out);

#ifdef __cplusplus
}
#endif

#endif /* PRIVDIST_H */
