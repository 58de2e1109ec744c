//! Distance-law path loss.

use crate::error::{AerolayError, Result};

/// 3-D distance from a 2-D ground distance and the endpoint heights.
pub fn dist_3d_m(r_2d_m: f64, h_tx_m: f64, h_rx_m: f64) -> f64 {
    let dh = h_tx_m - h_rx_m;
    (r_2d_m * r_2d_m + dh * dh).sqrt()
}

/// Linear path loss `tau_hat * d^alpha`.
///
/// `tau_hat_lin` is the reference loss already converted out of dB.
/// Co-located nodes (`d = 0`) are a domain error.
pub fn path_loss_linear(tau_hat_lin: f64, alpha: f64, dist_3d_m: f64) -> Result<f64> {
    if dist_3d_m <= 0.0 {
        return Err(AerolayError::Domain(
            "path loss at zero 3-D distance (co-located nodes)".into(),
        ));
    }
    Ok(tau_hat_lin * dist_3d_m.powf(alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{db_to_lin, lin_to_db};

    #[test]
    fn unit_reference_loss_at_reference_distance() {
        // tau_hat = 0 dB, d = 1 m
        assert_eq!(path_loss_linear(1.0, 2.2, 1.0).unwrap(), 1.0);
    }

    #[test]
    fn uav_to_bs_los_overhead() {
        // UAV at 100 m straight above a 25 m BS: d = 75 m,
        // tau_hat = 28 + 20 log10(2 GHz) = 34.02 dB, alpha = 2.2
        let tau_db = 28.0 + 20.0 * 2.0f64.log10();
        let d = dist_3d_m(0.0, 100.0, 25.0);
        assert_eq!(d, 75.0);
        let pl_db = lin_to_db(path_loss_linear(db_to_lin(tau_db), 2.2, d).unwrap());
        let expected = tau_db + 22.0 * 75.0f64.log10();
        assert!((pl_db - expected).abs() < 1e-9);
        assert!((pl_db - 75.27).abs() < 0.01, "pl = {pl_db} dB");
    }

    #[test]
    fn gue_to_bs_nlos_at_100m() {
        let tau_db = 13.54 + 20.0 * 2.0f64.log10();
        let pl_db = lin_to_db(path_loss_linear(db_to_lin(tau_db), 3.9, 100.0).unwrap());
        assert!((pl_db - 97.56).abs() < 0.01, "pl = {pl_db} dB");
    }

    #[test]
    fn strictly_increasing_in_distance() {
        let mut prev = 0.0;
        for i in 1..200 {
            let d = i as f64 * 7.0;
            let pl = path_loss_linear(2523.0, 2.2, d).unwrap();
            assert!(pl > prev);
            prev = pl;
        }
    }

    #[test]
    fn los_not_above_nlos_when_both_constants_ordered() {
        // gu is the Table-defaults link kind with tau^L <= tau^N and
        // alpha^L <= alpha^N (heights 100/1.5 m)
        let tau_l = db_to_lin(30.9 + 20.0 * 2.0f64.log10());
        let tau_n = db_to_lin(32.4 + 20.0 * 2.0f64.log10());
        let (al, an) = (2.225 - 0.05 * 2.0, 4.32 - 0.76 * 2.0);
        assert!(al <= an);
        let mut d = 1.0;
        while d < 10_000.0 {
            let l = path_loss_linear(tau_l, al, d).unwrap();
            let n = path_loss_linear(tau_n, an, d).unwrap();
            assert!(l <= n, "LoS loss above NLoS at d = {d}");
            d *= 1.37;
        }
    }

    #[test]
    fn colocated_nodes_rejected() {
        assert!(path_loss_linear(1.0, 2.0, 0.0).is_err());
    }
}
