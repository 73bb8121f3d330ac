package icons;

import android.content.Context;
import android.content.res.Resources;
import android.graphics.drawable.Drawable;
import androidx.core.content.ContextCompat;

public class IconLoader {
    private final Context context;

    public IconLoader(Context context) {
        this.context = context;
    }

    public Drawable load(int id) {
        Resources res = context.getResources();
        Drawable icon = ContextCompat.getDrawable(context, id);
        return icon;
    }
}
