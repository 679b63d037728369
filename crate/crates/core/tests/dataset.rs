use std::collections::BTreeMap;
use std::path::Path;
use std::time::SystemTime;

use fingersynth::evaluation::export_grayscale;
use fingersynth::generation::{
    expected_rows, generate_dataset, DatasetOptions, GenerationConfig, PresetName, SampleManifest, MANIFEST_FILE,
};
use fingersynth::io::save_gray_png;
use fingersynth::raster::GrayImage;
use fingersynth::Error;

fn small_config() -> GenerationConfig {
    let mut c = GenerationConfig::default();
    c.canvas.width = 160;
    c.canvas.height = 208;
    c.canvas.margin = 12;
    c
}

fn mtimes(dir: &Path, manifest: &SampleManifest) -> BTreeMap<String, SystemTime> {
    manifest
        .rows()
        .map(|r| (r.path.clone(), std::fs::metadata(dir.join(&r.path)).unwrap().modified().unwrap()))
        .collect()
}

#[test]
fn row_count_formula() {
    assert_eq!(expected_rows(1000, 6, 3), 18_000);
    assert_eq!(expected_rows(10, 6, 3), 180);
}

#[test]
fn counts_rows_and_files() {
    let dir = tempfile::tempdir().unwrap();
    let m = generate_dataset(&small_config(), 2, 2, &[PresetName::Medium], dir.path(), &DatasetOptions::default()).unwrap();
    assert_eq!(m.len(), 4);
    for row in m.rows() {
        assert!(dir.path().join(&row.path).is_file());
        assert!(row.proxy_quality.is_some());
    }
    let pngs = std::fs::read_dir(dir.path().join("medium")).unwrap().count();
    assert_eq!(pngs, 4);
    assert_eq!(SampleManifest::read(dir.path().join(MANIFEST_FILE)).unwrap(), m);
}

#[test]
fn manifest_layout() {
    let dir = tempfile::tempdir().unwrap();
    generate_dataset(&small_config(), 2, 1, &PresetName::ALL, dir.path(), &DatasetOptions::default()).unwrap();
    let text = std::fs::read_to_string(dir.path().join(MANIFEST_FILE)).unwrap();
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "identity_id,session_index,preset,identity_seed,session_seed_material,path,proxy_quality");
    assert_eq!(lines.len(), 7);
    // rows sorted by (identity, session, preset)
    assert!(lines[1].starts_with("0,0,high,"));
    assert!(lines[3].starts_with("0,0,low,"));
    assert!(lines[4].starts_with("1,0,high,"));
}

#[test]
fn rerun_rewrites_nothing_and_repairs_missing_files() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_config();
    let opts = DatasetOptions::default();
    let first = generate_dataset(&config, 2, 2, &[PresetName::High, PresetName::Low], dir.path(), &opts).unwrap();
    let before = mtimes(dir.path(), &first);
    std::thread::sleep(std::time::Duration::from_millis(20));
    let second = generate_dataset(&config, 2, 2, &[PresetName::High, PresetName::Low], dir.path(), &opts).unwrap();
    assert_eq!(first, second);
    assert_eq!(before, mtimes(dir.path(), &second));

    let victim = dir.path().join(&first.rows().nth(2).unwrap().path);
    let bytes = std::fs::read(&victim).unwrap();
    std::fs::remove_file(&victim).unwrap();
    generate_dataset(&config, 2, 2, &[PresetName::High, PresetName::Low], dir.path(), &opts).unwrap();
    assert_eq!(std::fs::read(&victim).unwrap(), bytes);
}

#[test]
fn jobs_do_not_change_bytes() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let config = small_config();
    let one = DatasetOptions { jobs: 1, ..Default::default() };
    let four = DatasetOptions { jobs: 4, ..Default::default() };
    let ma = generate_dataset(&config, 3, 2, &PresetName::ALL, a.path(), &one).unwrap();
    generate_dataset(&config, 3, 2, &PresetName::ALL, b.path(), &four).unwrap();
    for row in ma.rows() {
        assert_eq!(std::fs::read(a.path().join(&row.path)).unwrap(), std::fs::read(b.path().join(&row.path)).unwrap());
    }
    assert_eq!(std::fs::read(a.path().join(MANIFEST_FILE)).unwrap(), std::fs::read(b.path().join(MANIFEST_FILE)).unwrap());
}

#[test]
fn intermediates_are_dumped_on_request() {
    let dir = tempfile::tempdir().unwrap();
    let opts = DatasetOptions { jobs: 1, dump_intermediates: true };
    generate_dataset(&small_config(), 1, 1, &[PresetName::Low], dir.path(), &opts).unwrap();
    let stage_dir = dir.path().join("intermediates/low/id00000_s00");
    let mut names: Vec<String> = std::fs::read_dir(&stage_dir).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(names.first().unwrap(), "00_ridge.png");
    assert_eq!(names.last().unwrap(), "12_dirt.png");
    assert_eq!(names.len(), 13);
}

#[test]
fn unwritable_output_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("occupied");
    std::fs::write(&file, b"x").unwrap();
    let err = generate_dataset(&small_config(), 1, 1, &[PresetName::High], &file, &DatasetOptions::default()).unwrap_err();
    assert!(matches!(err, Error::OutputUnwritable { .. }), "{err}");
}

#[test]
fn rejects_empty_requests() {
    let dir = tempfile::tempdir().unwrap();
    let c = small_config();
    let o = DatasetOptions::default();
    assert!(generate_dataset(&c, 0, 1, &[PresetName::High], dir.path(), &o).is_err());
    assert!(generate_dataset(&c, 1, 0, &[PresetName::High], dir.path(), &o).is_err());
    assert!(generate_dataset(&c, 1, 1, &[], dir.path(), &o).is_err());
}

#[test]
fn ingests_external_ridge_images() {
    let dir = tempfile::tempdir().unwrap();
    let ridges = dir.path().join("ridges");
    std::fs::create_dir_all(&ridges).unwrap();
    let mut config = small_config();
    let (w, h) = config.dims();
    for (i, period) in [8.0, 10.0].into_iter().enumerate() {
        let img = GrayImage::from_fn(w, h, |x, y| 0.5 + 0.5 * ((x + 2 * y) as f64 / period).sin());
        save_gray_png(&img, ridges.join(format!("r{i}.png"))).unwrap();
    }
    config.ridge.input_dir = Some(ridges);
    let out = dir.path().join("out");
    let m = generate_dataset(&config, 2, 1, &[PresetName::High], &out, &DatasetOptions::default()).unwrap();
    assert_eq!(m.len(), 2);
    let err = generate_dataset(&config, 3, 1, &[PresetName::High], &out, &DatasetOptions::default()).unwrap_err();
    assert!(matches!(err, Error::InsufficientData(_)), "{err}");
}

#[test]
fn grayscale_export_mirrors_dataset() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    let gray = dir.path().join("gray");
    let m = generate_dataset(&small_config(), 2, 1, &[PresetName::High], &data, &DatasetOptions::default()).unwrap();
    let files = export_grayscale(data.join(MANIFEST_FILE), &gray).unwrap();
    assert_eq!(files.len(), m.len());
    for f in &files {
        let decoder = png::Decoder::new(std::io::BufReader::new(std::fs::File::open(f).unwrap()));
        let reader = decoder.read_info().unwrap();
        let info = reader.info();
        assert_eq!(info.color_type, png::ColorType::Grayscale);
        assert_eq!(info.bit_depth, png::BitDepth::Eight);
        assert_eq!((info.width, info.height), (160, 208));
        let dims = info.pixel_dims.unwrap();
        assert_eq!(dims.unit, png::Unit::Meter);
        assert!((dims.xppu as f64 * 0.0254 - 500.0).abs() < 0.1);
    }
    let exported = SampleManifest::read(gray.join(MANIFEST_FILE)).unwrap();
    assert_eq!(exported.len(), m.len());
    assert!(exported.rows().all(|r| gray.join(&r.path).is_file()));
}
