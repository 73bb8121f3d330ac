package capture;

import android.graphics.Bitmap;
import android.view.View;

public class SnapshotHelper {
    public Bitmap grab(View view) {
        view.setDrawingCacheQuality(View.DRAWING_CACHE_QUALITY_HIGH);
        view.buildDrawingCache();
        return view.getDrawingCache();
    }
}
