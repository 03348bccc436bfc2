//! Argument parsing helpers shared by the `qdist` binary and its tests.

use qdist_core::error::Error;
use qdist_core::photon::{
    CoherentParams, GlauberLachsParams, PhotonState, SqueezeParams, ThermalParams,
};

/// Exit status for a run that finished and met every tolerance.
pub const EXIT_OK: u8 = 0;
/// A tolerance or cross-route consistency check failed.
pub const EXIT_CHECK_FAILED: u8 = 1;
/// Bad arguments, an invalid spec or an unwritable output.
pub const EXIT_USAGE: u8 = 2;

/// Parses `family[:param[,param]]`:
///
/// ```text
/// vacuum | fock:j | coherent:mean | squeezed:r | thermal:nbar | glauber_lachs:mean,nbar
/// ```
pub fn parse_state_descriptor(text: &str) -> Result<PhotonState, Error> {
    let text = text.trim();
    let (family, args) = match text.split_once(':') {
        Some((f, a)) => (f, a.split(',').map(str::trim).collect::<Vec<_>>()),
        None => (text, Vec::new()),
    };
    let bad = |msg: String| Error::InvalidSpec(format!("state '{text}': {msg}"));
    let want = |n: usize| {
        if args.len() == n {
            Ok(())
        } else {
            Err(bad(format!("{family} takes {n} parameter(s), got {}", args.len())))
        }
    };
    let real = |s: &str| -> Result<f64, Error> {
        s.parse::<f64>().map_err(|_| bad(format!("'{s}' is not a number")))
    };
    let wrap = |e: Error| match e {
        Error::Domain(m) => bad(m),
        other => other,
    };
    match family {
        "vacuum" => {
            want(0)?;
            Ok(PhotonState::VACUUM)
        }
        "fock" => {
            want(1)?;
            let j = args[0]
                .parse::<usize>()
                .map_err(|_| bad(format!("'{}' is not a photon number", args[0])))?;
            Ok(PhotonState::Fock { j })
        }
        "coherent" => {
            want(1)?;
            Ok(PhotonState::Coherent(CoherentParams::new(real(args[0])?).map_err(wrap)?))
        }
        "squeezed" => {
            want(1)?;
            Ok(PhotonState::Squeezed(SqueezeParams::new(real(args[0])?).map_err(wrap)?))
        }
        "thermal" => {
            want(1)?;
            Ok(PhotonState::Thermal(ThermalParams::new(real(args[0])?).map_err(wrap)?))
        }
        "glauber_lachs" => {
            want(2)?;
            let p = GlauberLachsParams::new(real(args[0])?, real(args[1])?).map_err(wrap)?;
            Ok(PhotonState::GlauberLachs(p))
        }
        other => Err(bad(format!(
            "unknown family '{other}' (expected vacuum, fock, coherent, squeezed, thermal or glauber_lachs)"
        ))),
    }
}

/// A state pair written `A/B`, e.g. `vacuum/thermal:2`.
pub fn parse_state_pair(text: &str) -> Result<(PhotonState, PhotonState), Error> {
    let (a, b) = text
        .split_once('/')
        .ok_or_else(|| Error::InvalidSpec(format!("pair '{text}' must look like A/B")))?;
    Ok((parse_state_descriptor(a)?, parse_state_descriptor(b)?))
}

/// `lo:hi` with `lo <= hi`.
pub fn parse_window(text: &str) -> Result<(u64, u64), Error> {
    let bad = || Error::InvalidSpec(format!("window '{text}' must look like lo:hi"));
    let (lo, hi) = text.split_once(':').ok_or_else(bad)?;
    let lo = lo.trim().parse::<u64>().map_err(|_| bad())?;
    let hi = hi.trim().parse::<u64>().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

/// Maps a library error to the process exit status.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidSpec(_) | Error::Domain(_) | Error::Io(_) => EXIT_USAGE,
        _ => EXIT_CHECK_FAILED,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptors() {
        assert_eq!(parse_state_descriptor("vacuum").unwrap(), PhotonState::Fock { j: 0 });
        assert_eq!(parse_state_descriptor("fock:3").unwrap(), PhotonState::Fock { j: 3 });
        assert_eq!(
            parse_state_descriptor("glauber_lachs:1,2").unwrap(),
            PhotonState::GlauberLachs(GlauberLachsParams {
                coherent_mean: 1.0,
                thermal_mean: 2.0
            })
        );
        assert_eq!(
            parse_state_descriptor(" squeezed:0.5 ").unwrap(),
            PhotonState::Squeezed(SqueezeParams { r: 0.5 })
        );
    }

    #[test]
    fn rejected_descriptors() {
        for s in [
            "coherent:-1",
            "coherent",
            "coherent:1,2",
            "fock:-2",
            "fock:1.5",
            "thermal:nan",
            "thermal:x",
            "glauber_lachs:1",
            "vacuum:0",
            "laser:1",
            "",
        ] {
            let e = parse_state_descriptor(s).unwrap_err();
            assert!(matches!(e, Error::InvalidSpec(_)), "{s}: {e}");
            assert_eq!(exit_code(&e), EXIT_USAGE);
        }
    }

    #[test]
    fn pairs_and_windows() {
        let (a, b) = parse_state_pair("vacuum/glauber_lachs:1,2").unwrap();
        assert_eq!(a, PhotonState::VACUUM);
        assert!(matches!(b, PhotonState::GlauberLachs(_)));
        assert!(parse_state_pair("vacuum").is_err());
        assert_eq!(parse_window("50:400").unwrap(), (50, 400));
        assert!(parse_window("400:50").is_err());
        assert!(parse_window("50").is_err());
    }

    #[test]
    fn exit_codes() {
        let tol = Error::ToleranceExceeded {
            what: "x".into(),
            deviation: 1.0,
            tol: 0.1,
        };
        assert_eq!(exit_code(&tol), EXIT_CHECK_FAILED);
        assert_eq!(exit_code(&Error::InvalidSpec("x".into())), EXIT_USAGE);
    }
}
