//! WFDB records (text header plus format-212 signal file), plain CSV signals,
//! and a downloader for the public MIT-BIH files.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use crate::error::{Error, Result};
use crate::signal::Signal;

/// Environment variable naming the dataset root.
pub const DATA_DIR_ENV: &str = "ECGSCRUB_DATA_DIR";
pub const MITDB_URL: &str = "https://physionet.org/files/mitdb/1.0.0/";
pub const NSTDB_URL: &str = "https://physionet.org/files/nstdb/1.0.0/";

const DEFAULT_GAIN: f64 = 200.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleFormat {
    /// Two 12-bit two's-complement samples in three bytes.
    Packed212,
}

impl SampleFormat {
    pub fn from_code(code: u16) -> Result<Self> {
        match code {
            212 => Ok(SampleFormat::Packed212),
            other => Err(Error::UnsupportedFormat(other)),
        }
    }

    pub fn code(self) -> u16 {
        match self {
            SampleFormat::Packed212 => 212,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignalSpec {
    pub file_name: String,
    pub format: SampleFormat,
    /// adu per physical unit.
    pub gain: f64,
    /// adu value of physical zero.
    pub baseline: i32,
    pub units: String,
    pub adc_resolution: Option<u32>,
    pub adc_zero: i32,
    pub initial_value: Option<i32>,
    pub checksum: Option<i32>,
    /// Lead name, e.g. `MLII`.
    pub description: String,
}

impl SignalSpec {
    pub fn to_physical(&self, adu: i32) -> f64 {
        f64::from(adu - self.baseline) / self.gain
    }

    /// Nearest adu value for a physical sample.
    pub fn to_adu(&self, value: f64) -> i32 {
        (value * self.gain).round() as i32 + self.baseline
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecordHeader {
    pub record_name: String,
    pub fs: f64,
    /// Samples per signal; `None` when the header leaves it to the file size.
    pub n_samples: Option<usize>,
    pub signals: Vec<SignalSpec>,
}

impl RecordHeader {
    pub fn n_signals(&self) -> usize {
        self.signals.len()
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let bad = |reason: String| Error::Header {
            path: path.to_path_buf(),
            reason,
        };
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let record_line = lines.next().ok_or_else(|| bad("empty header".into()))?;
        let fields: Vec<&str> = record_line.split_whitespace().collect();
        if fields.len() < 2 {
            return Err(bad(format!("record line {record_line:?} has no signal count")));
        }
        let record_name = fields[0].to_string();
        if record_name.contains('/') {
            return Err(bad("multi-segment records are not supported".into()));
        }
        let n_signals: usize = fields[1]
            .parse()
            .map_err(|_| bad(format!("bad signal count {:?}", fields[1])))?;
        if n_signals == 0 {
            return Err(bad("record has no signals".into()));
        }
        let fs = match fields.get(2) {
            Some(f) => {
                let head = f.split(['/', '(']).next().unwrap_or(f);
                head.parse::<f64>().map_err(|_| bad(format!("bad sampling frequency {f:?}")))?
            }
            None => 250.0,
        };
        if !(fs > 0.0 && fs.is_finite()) {
            return Err(bad(format!("sampling frequency must be positive, got {fs}")));
        }
        let n_samples = match fields.get(3) {
            Some(f) => Some(f.parse::<usize>().map_err(|_| bad(format!("bad sample count {f:?}")))?),
            None => None,
        };

        let mut signals = Vec::with_capacity(n_signals);
        for i in 0..n_signals {
            let line = lines
                .next()
                .ok_or_else(|| bad(format!("expected {n_signals} signal lines, found {i}")))?;
            signals.push(parse_signal_line(line).map_err(bad)?);
        }
        Ok(Self {
            record_name,
            fs,
            n_samples,
            signals,
        })
    }
}

fn parse_signal_line(line: &str) -> std::result::Result<SignalSpec, String> {
    let mut fields = line.split_whitespace();
    let file_name = fields.next().ok_or("empty signal line")?.to_string();
    let fmt_field = fields.next().ok_or_else(|| format!("signal line {line:?} has no format"))?;
    let code_str: String = fmt_field.chars().take_while(char::is_ascii_digit).collect();
    let code: u16 = code_str
        .parse()
        .map_err(|_| format!("bad format field {fmt_field:?}"))?;
    if code_str.len() != fmt_field.len() {
        return Err(format!(
            "format modifiers in {fmt_field:?} (samples per frame, skew, byte offset) are not supported"
        ));
    }
    let format = SampleFormat::from_code(code).map_err(|e| e.to_string())?;

    // gain[(baseline)][/units]
    let (mut gain, mut baseline, mut units) = (DEFAULT_GAIN, None, "mV".to_string());
    if let Some(g) = fields.next() {
        let (g, u) = match g.split_once('/') {
            Some((g, u)) => (g, Some(u)),
            None => (g, None),
        };
        let (g, b) = match g.split_once('(') {
            Some((g, b)) => (g, Some(b.trim_end_matches(')'))),
            None => (g, None),
        };
        let parsed: f64 = g.parse().map_err(|_| format!("bad gain {g:?}"))?;
        if parsed < 0.0 || !parsed.is_finite() {
            return Err(format!("gain must be positive, got {parsed}"));
        }
        if parsed > 0.0 {
            gain = parsed;
        }
        if let Some(b) = b {
            baseline = Some(b.parse::<i32>().map_err(|_| format!("bad baseline {b:?}"))?);
        }
        if let Some(u) = u {
            units = u.to_string();
        }
    }
    let mut int_field = |name: &str| -> std::result::Result<Option<i32>, String> {
        fields
            .next()
            .map(|f| f.parse::<i32>().map_err(|_| format!("bad {name} {f:?}")))
            .transpose()
    };
    let adc_resolution = int_field("ADC resolution")?.map(|v| v as u32);
    let adc_zero = int_field("ADC zero")?.unwrap_or(0);
    let initial_value = int_field("initial value")?;
    let checksum = int_field("checksum")?;
    let _block_size = int_field("block size")?;
    let description = fields.collect::<Vec<_>>().join(" ");
    Ok(SignalSpec {
        file_name,
        format,
        gain,
        baseline: baseline.unwrap_or(adc_zero),
        units,
        adc_resolution,
        adc_zero,
        initial_value,
        checksum,
        description,
    })
}

/// Decodes format-212 bytes into sign-extended 12-bit values. A trailing
/// byte pair that holds only one sample yields that sample alone.
pub fn decode_212(bytes: &[u8]) -> Vec<i16> {
    let mut out = Vec::with_capacity(bytes.len() / 3 * 2 + 1);
    let sext = |v: u16| ((v << 4) as i16) >> 4;
    let mut chunks = bytes.chunks_exact(3);
    for c in &mut chunks {
        out.push(sext(u16::from(c[0]) | (u16::from(c[1] & 0x0f) << 8)));
        out.push(sext(u16::from(c[2]) | (u16::from(c[1] & 0xf0) << 4)));
    }
    if let [b0, b1, ..] = chunks.remainder() {
        out.push(sext(u16::from(*b0) | (u16::from(b1 & 0x0f) << 8)));
    }
    out
}

/// Packs values into format 212. Values must lie in `[-2048, 2047]`; an odd
/// count is padded with a zero sample.
pub fn encode_212(values: &[i16]) -> Result<Vec<u8>> {
    if let Some(v) = values.iter().find(|v| !(-2048..=2047).contains(*v)) {
        return Err(Error::InvalidParameter(format!("{v} does not fit in 12 bits")));
    }
    let mut out = Vec::with_capacity(values.len().div_ceil(2) * 3);
    for pair in values.chunks(2) {
        let a = pair[0] as u16 & 0x0fff;
        let b = pair.get(1).map_or(0, |&v| v as u16 & 0x0fff);
        out.push((a & 0xff) as u8);
        out.push(((a >> 8) as u8) | (((b >> 8) as u8) << 4));
        out.push((b & 0xff) as u8);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub header: RecordHeader,
    /// Raw adu values, one vector per signal.
    pub adu: Vec<Vec<i16>>,
    /// One signal per lead, in physical units.
    pub signals: Vec<Signal>,
    /// Non-fatal problems, such as checksum mismatches.
    pub warnings: Vec<String>,
}

impl Record {
    /// The signal whose description matches `lead`, or the first one.
    pub fn lead(&self, lead: Option<&str>) -> Result<&Signal> {
        match lead {
            None => Ok(&self.signals[0]),
            Some(name) => self
                .header
                .signals
                .iter()
                .position(|s| s.description == name)
                .map(|i| &self.signals[i])
                .ok_or_else(|| {
                    Error::InvalidParameter(format!(
                        "record {} has no lead {name:?}",
                        self.header.record_name
                    ))
                }),
        }
    }
}

/// Reads a WFDB record given its `.hea` path (the extension may be omitted).
pub fn read_record(header_path: &Path) -> Result<Record> {
    let header_path = if header_path.extension().is_none() {
        header_path.with_extension("hea")
    } else {
        header_path.to_path_buf()
    };
    let text = fs::read_to_string(&header_path).map_err(|e| Error::io(&header_path, e))?;
    let header = RecordHeader::parse(&text, &header_path)?;
    let dir = header_path.parent().unwrap_or(Path::new("."));

    // Signals stored in the same file are interleaved frame by frame.
    let mut groups: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, s) in header.signals.iter().enumerate() {
        groups.entry(s.file_name.as_str()).or_default().push(i);
    }
    let mut adu: Vec<Vec<i16>> = vec![Vec::new(); header.n_signals()];
    for (file, members) in &groups {
        let path = dir.join(file);
        let bytes = fs::read(&path).map_err(|e| Error::io(&path, e))?;
        let width = members.len();
        let available = bytes.len() * 2 / 3 / width;
        let n = header.n_samples.unwrap_or(available);
        let needed_bytes = (n * width * 3).div_ceil(2);
        if bytes.len() < needed_bytes {
            let whole_frames = bytes.len() * 2 / 3 / width;
            return Err(Error::Truncated {
                path,
                offset: whole_frames * width * 3 / 2,
            });
        }
        let values = decode_212(&bytes[..needed_bytes]);
        for (k, &sig) in members.iter().enumerate() {
            adu[sig] = values.iter().skip(k).step_by(width).take(n).copied().collect();
        }
    }

    let mut warnings = Vec::new();
    let mut signals = Vec::with_capacity(header.n_signals());
    for (spec, values) in header.signals.iter().zip(&adu) {
        if let Some(expected) = spec.checksum {
            let sum = values.iter().fold(0i16, |acc, &v| acc.wrapping_add(v));
            if i32::from(sum) != expected {
                warnings.push(format!(
                    "{}: checksum {} does not match header {expected}",
                    spec.description, sum
                ));
            }
        }
        let samples = values.iter().map(|&v| spec.to_physical(i32::from(v))).collect();
        signals.push(Signal::new(samples, header.fs)?);
    }
    Ok(Record {
        header,
        adu,
        signals,
        warnings,
    })
}

/// Dataset root from [`DATA_DIR_ENV`].
pub fn data_dir() -> Option<PathBuf> {
    std::env::var_os(DATA_DIR_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
}

/// Header path of `name` under `root`, looking in `root`, `root/mitdb` and `root/nstdb`.
pub fn locate_record(root: &Path, name: &str) -> Option<PathBuf> {
    ["", "mitdb", "nstdb"]
        .iter()
        .map(|sub| root.join(sub).join(format!("{name}.hea")))
        .find(|p| p.is_file())
}

/// One value per line; a non-numeric first line is taken as a column
/// header and `#` lines are comments.
pub fn read_csv(path: &Path, fs: f64) -> Result<Signal> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut samples = Vec::new();
    let mut seen_content = false;
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let field = line.split(',').next().unwrap_or("").trim();
        if field.is_empty() || field.starts_with('#') {
            continue;
        }
        match field.parse::<f64>() {
            Ok(v) => samples.push(v),
            Err(_) if !seen_content => {}
            Err(_) => {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line: i + 1,
                    reason: format!("not a number: {field:?}"),
                })
            }
        }
        seen_content = true;
    }
    if samples.is_empty() {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            reason: "no samples".into(),
        });
    }
    Signal::new(samples, fs)
}

/// Writes `signal` one value per line, preceded by `# ` comment lines.
/// Values are printed in shortest round-trip form.
pub fn write_csv(path: &Path, signal: &Signal, comments: &[String]) -> Result<()> {
    let mut out = String::with_capacity(signal.len() * 24);
    for c in comments {
        for line in c.lines() {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
    }
    for v in signal.samples() {
        out.push_str(&format!("{v:?}\n"));
    }
    let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(out.as_bytes()).map_err(|e| Error::io(path, e))
}

/// Downloads `{base_url}{name}.hea` and the signal files it names into
/// `dest`, checking each body against its Content-Length and the signal
/// files against the size the header implies. Returns the header path.
pub fn fetch_record(base_url: &str, name: &str, dest: &Path) -> Result<PathBuf> {
    fs::create_dir_all(dest).map_err(|e| Error::io(dest, e))?;
    let base = if base_url.ends_with('/') {
        base_url.to_string()
    } else {
        format!("{base_url}/")
    };
    let header_name = format!("{name}.hea");
    let header_path = dest.join(&header_name);
    download(&format!("{base}{header_name}"), &header_path)?;
    let text = fs::read_to_string(&header_path).map_err(|e| Error::io(&header_path, e))?;
    let header = RecordHeader::parse(&text, &header_path)?;

    let mut files: BTreeMap<&str, usize> = BTreeMap::new();
    for s in &header.signals {
        *files.entry(s.file_name.as_str()).or_default() += 1;
    }
    for (file, width) in files {
        let path = dest.join(file);
        let url = format!("{base}{file}");
        let size = download(&url, &path)?;
        if let Some(n) = header.n_samples {
            let expected = (n * width * 3).div_ceil(2) as u64;
            if size < expected {
                return Err(Error::Fetch {
                    url,
                    reason: format!("got {size} bytes, header implies at least {expected}"),
                });
            }
        }
    }
    Ok(header_path)
}

fn download(url: &str, path: &Path) -> Result<u64> {
    let fail = |reason: String| Error::Fetch {
        url: url.to_string(),
        reason,
    };
    let agent: ureq::Agent = ureq::Agent::config_builder()
        .timeout_global(Some(Duration::from_secs(120)))
        .build()
        .into();
    let mut resp = agent.get(url).call().map_err(|e| fail(e.to_string()))?;
    let declared = resp
        .headers()
        .get("content-length")
        .and_then(|v| v.to_str().ok())
        .and_then(|v| v.parse::<u64>().ok());
    let body = resp
        .body_mut()
        .with_config()
        .limit(256 * 1024 * 1024)
        .read_to_vec()
        .map_err(|e| fail(e.to_string()))?;
    if let Some(n) = declared {
        if n != body.len() as u64 {
            return Err(fail(format!("received {} of {n} bytes", body.len())));
        }
    }
    let tmp = path.with_extension("part");
    fs::write(&tmp, &body).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))?;
    Ok(body.len() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use tempfile::tempdir;

    const HEADER: &str = "rec 2 360 6\n\
        rec.dat 212 200 11 1024 995 {c0} 0 MLII\n\
        rec.dat 212 200 11 1024 1011 {c1} 0 V5\n\
        # a comment\n";

    fn write_record(dir: &Path, frames: &[[i16; 2]], checksums: (i32, i32)) -> PathBuf {
        let header = HEADER
            .replace("{c0}", &checksums.0.to_string())
            .replace("{c1}", &checksums.1.to_string())
            .replace(" 6\n", &format!(" {}\n", frames.len()));
        fs::write(dir.join("rec.hea"), header).unwrap();
        let flat: Vec<i16> = frames.iter().flatten().copied().collect();
        fs::write(dir.join("rec.dat"), encode_212(&flat).unwrap()).unwrap();
        dir.join("rec.hea")
    }

    fn sums(frames: &[[i16; 2]]) -> (i32, i32) {
        let s = |k: usize| frames.iter().fold(0i16, |a, f| a.wrapping_add(f[k])) as i32;
        (s(0), s(1))
    }

    #[test]
    fn decodes_known_bytes() {
        // 0x3e3 = 995 and 0x3f3 = 1011 share the middle byte 0x33.
        assert_eq!(decode_212(&[0xe3, 0x33, 0xf3]), vec![995, 1011]);
        assert_eq!(decode_212(&[0xff, 0x8f, 0x00]), vec![-1, -2048]);
        assert_eq!(decode_212(&[0x01, 0x00]), vec![1]);
    }

    proptest! {
        #[test]
        fn encode_decode_roundtrip(v in proptest::collection::vec(-2048i16..=2047, 0..200)) {
            let mut v = v;
            if v.len() % 2 == 1 { v.pop(); }
            let bytes = encode_212(&v).unwrap();
            prop_assert_eq!(&decode_212(&bytes), &v);
            prop_assert_eq!(encode_212(&decode_212(&bytes)).unwrap(), bytes);
        }
    }

    #[test]
    fn reads_interleaved_record() {
        let dir = tempdir().unwrap();
        let frames = [[995, 1011], [995, 1011], [1000, 1020], [-5, 2047], [1024, 1024], [0, -2048]];
        let path = write_record(dir.path(), &frames, sums(&frames));
        let rec = read_record(&path).unwrap();
        assert!(rec.warnings.is_empty(), "{:?}", rec.warnings);
        assert_eq!(rec.header.n_signals(), 2);
        assert_eq!(rec.header.fs, 360.0);
        assert_eq!(rec.adu[0], frames.iter().map(|f| f[0]).collect::<Vec<_>>());
        assert_eq!(rec.adu[1], frames.iter().map(|f| f[1]).collect::<Vec<_>>());
        let mlii = rec.lead(Some("MLII")).unwrap();
        assert_eq!(mlii.samples()[0], (995.0 - 1024.0) / 200.0);
        assert_eq!(mlii.samples()[4], 0.0);
        assert!(rec.lead(Some("V1")).is_err());
        let spec = &rec.header.signals[0];
        for &v in &rec.adu[0] {
            assert_eq!(spec.to_adu(spec.to_physical(i32::from(v))), i32::from(v));
        }
        assert_eq!(read_record(&dir.path().join("rec")).unwrap(), rec);
    }

    #[test]
    fn checksum_mismatch_warns() {
        let dir = tempdir().unwrap();
        let frames = [[1, 2], [3, 4]];
        let path = write_record(dir.path(), &frames, (99, 6));
        let rec = read_record(&path).unwrap();
        assert_eq!(rec.warnings.len(), 1);
        assert_eq!(rec.adu[0], vec![1, 3]);
    }

    #[test]
    fn failure_modes() {
        let dir = tempdir().unwrap();
        let frames = [[1, 2], [3, 4], [5, 6], [7, 8]];
        let path = write_record(dir.path(), &frames, sums(&frames));
        let dat = dir.path().join("rec.dat");
        let bytes = fs::read(&dat).unwrap();
        fs::write(&dat, &bytes[..7]).unwrap();
        assert!(matches!(read_record(&path), Err(Error::Truncated { offset: 6, .. })));
        fs::remove_file(&dat).unwrap();
        assert!(matches!(read_record(&path), Err(Error::Io { .. })));
        let other = dir.path().join("fmt16.hea");
        fs::write(&other, "x 1 360 4\nx.dat 16 200 16 0 0 0 0 I\n").unwrap();
        let err = read_record(&other).unwrap_err();
        assert!(err.to_string().contains("unsupported format 16"), "{err}");
    }

    #[test]
    fn header_defaults_and_errors() {
        let p = Path::new("t.hea");
        let h = RecordHeader::parse("r 1\nr.dat 212\n", p).unwrap();
        assert_eq!(h.fs, 250.0);
        assert_eq!(h.n_samples, None);
        assert_eq!(h.signals[0].gain, DEFAULT_GAIN);
        assert_eq!(h.signals[0].baseline, 0);
        let h = RecordHeader::parse("r 1 360/1000 10\nr.dat 212 100(-3)/uV 12 7\n", p).unwrap();
        assert_eq!((h.fs, h.signals[0].gain, h.signals[0].baseline), (360.0, 100.0, -3));
        assert_eq!(h.signals[0].units, "uV");
        assert_eq!(h.signals[0].adc_zero, 7);
        for bad in ["", "r\n", "r 2 360\nr.dat 212\n", "r 1 abc\nr.dat 212\n", "r 1\nr.dat 212x2\n"] {
            assert!(RecordHeader::parse(bad, p).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn csv_roundtrip_and_errors() {
        let dir = tempdir().unwrap();
        let p = dir.path().join("a.csv");
        fs::write(&p, "1.0\n2.0\n").unwrap();
        assert_eq!(read_csv(&p, 360.0).unwrap().samples(), &[1.0, 2.0]);
        fs::write(&p, "mV\n1.5\n").unwrap();
        assert_eq!(read_csv(&p, 360.0).unwrap().samples(), &[1.5]);
        fs::write(&p, "").unwrap();
        assert!(read_csv(&p, 360.0).is_err());
        fs::write(&p, "1\n2\nx\n").unwrap();
        assert!(matches!(read_csv(&p, 360.0), Err(Error::Parse { line: 3, .. })));

        let s = Signal::new(vec![0.1, -1e-300, 1.0 / 3.0, 12345.678901234567], 360.0).unwrap();
        write_csv(&p, &s, &["config\nlevels = 10".into()]).unwrap();
        assert_eq!(read_csv(&p, 360.0).unwrap(), s);
    }

    /// Serves `files` over HTTP on localhost for `requests` requests.
    fn serve(files: Vec<(&'static str, Vec<u8>)>, requests: usize) -> String {
        use std::io::Read;
        use std::net::TcpListener;
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = listener.local_addr().unwrap();
        std::thread::spawn(move || {
            for stream in listener.incoming().take(requests) {
                let mut stream = stream.unwrap();
                let mut buf = [0u8; 4096];
                let n = stream.read(&mut buf).unwrap();
                let req = String::from_utf8_lossy(&buf[..n]);
                let target = req.split_whitespace().nth(1).unwrap_or("/").trim_start_matches('/').to_string();
                match files.iter().find(|(name, _)| *name == target) {
                    Some((_, body)) => {
                        let head = format!("HTTP/1.1 200 OK\r\ncontent-length: {}\r\nconnection: close\r\n\r\n", body.len());
                        stream.write_all(head.as_bytes()).unwrap();
                        stream.write_all(body).unwrap();
                    }
                    None => {
                        stream
                            .write_all(b"HTTP/1.1 404 Not Found\r\ncontent-length: 0\r\nconnection: close\r\n\r\n")
                            .unwrap();
                    }
                }
            }
        });
        format!("http://{addr}/")
    }

    #[test]
    fn fetches_and_verifies_sizes() {
        let frames = [[995i16, 1011], [990, 1000]];
        let flat: Vec<i16> = frames.iter().flatten().copied().collect();
        let dat = encode_212(&flat).unwrap();
        let header = "rec 2 360 2\nrec.dat 212 200 11 1024 995 0 0 MLII\nrec.dat 212 200 11 1024 1011 0 0 V5\n";
        let base = serve(vec![("rec.hea", header.as_bytes().to_vec()), ("rec.dat", dat)], 2);
        let dir = tempdir().unwrap();
        let path = fetch_record(&base, "rec", dir.path()).unwrap();
        assert_eq!(locate_record(dir.path(), "rec"), Some(path.clone()));
        let rec = read_record(&path).unwrap();
        assert_eq!(rec.adu[0], vec![995, 990]);

        let short = "rec 2 360 50\nrec.dat 212\nrec.dat 212\n";
        let base = serve(vec![("rec.hea", short.as_bytes().to_vec()), ("rec.dat", vec![0; 6])], 2);
        let dir = tempdir().unwrap();
        assert!(matches!(fetch_record(&base, "rec", dir.path()), Err(Error::Fetch { .. })));

        let base = serve(vec![], 1);
        assert!(matches!(fetch_record(&base, "missing", dir.path()), Err(Error::Fetch { .. })));
    }
}
