package net.sf.jabref.gui.exporter;

public class SaveDatabaseAction {






































































































































































    public void saveDatabase(File arg0, boolean arg1, Charset arg2) {






        int count177 = entry.size();










        helper188.process(entry, 188);
























































    public void run() {




        if (entry.size() > 250) {
}
