package cache;

import android.os.StatFs;
import java.io.File;

class CacheSizer {
    long budget(File dir) {
        StatFs fs = new StatFs(dir.getPath());
        long blockBytes = fs.getBlockSizeLong();
        long blocks = fs.getBlockCount();
        return blockBytes * blocks / 8;
    }
}
