//! On-disk R-polynomial cache and report file names, one set per system
//! fingerprint.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use verma_ext_core::coxeter::WeylGroup;
use verma_ext_core::rpoly::RTable;

use crate::error::CliError;

pub struct CacheDir {
    root: PathBuf,
    stem: String,
}

impl CacheDir {
    pub fn new(root: &Path, group: &WeylGroup) -> CacheDir {
        CacheDir {
            root: root.to_path_buf(),
            stem: group.system().fingerprint().replace('#', "-"),
        }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn path(&self, suffix: &str) -> PathBuf {
        self.root.join(format!("{}.{suffix}", self.stem))
    }

    pub fn rpoly_path(&self) -> PathBuf {
        self.path("rpoly.csv")
    }

    /// Loads the cached table; a missing, corrupt or foreign file gives an
    /// empty table and a note on stderr.
    pub fn load_rtable(&self, group: &WeylGroup) -> RTable {
        let path = self.rpoly_path();
        let Ok(file) = File::open(&path) else {
            return RTable::new(group);
        };
        match RTable::read_csv(group, BufReader::new(file)) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("ignoring cache {}: {e}", path.display());
                RTable::new(group)
            }
        }
    }

    pub fn store_rtable(&self, group: &WeylGroup, table: &RTable) -> Result<PathBuf, CliError> {
        let path = self.rpoly_path();
        self.write_with(&path, |w| Ok(table.write_csv(group, w)?))?;
        Ok(path)
    }

    /// Writes through a temporary file so readers never see a partial file.
    pub fn write_with<F>(&self, path: &Path, body: F) -> Result<(), CliError>
    where
        F: FnOnce(&mut BufWriter<File>) -> Result<(), CliError>,
    {
        let io_err = |source| CliError::Write {
            path: path.display().to_string(),
            source,
        };
        fs::create_dir_all(&self.root).map_err(io_err)?;
        let tmp = path.with_extension("tmp");
        let mut w = BufWriter::new(File::create(&tmp).map_err(io_err)?);
        body(&mut w)?;
        w.flush().map_err(io_err)?;
        drop(w);
        fs::rename(&tmp, path).map_err(io_err)
    }
}
